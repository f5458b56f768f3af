//! `nlg`: exact values, membership checks, repairs and bounds for non-local
//! games, reported as JSON on standard output.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nonlocal_games::bounds::{self, BoundName, BoundParams};
use nonlocal_games::catalog;
use nonlocal_games::format::{Document, ReconstructDocument};
use nonlocal_games::game::{repeat_game_with, threshold_game_with, Limits};
use nonlocal_games::polytope::{is_ns, is_snos, NsMode};
use nonlocal_games::repair::{bump_up, reconstruct_snos};
use nonlocal_games::values::{value_with, Model};
use nonlocal_games::Error;

use report::{Input, Outcome};

#[derive(Parser)]
#[command(name = "nlg", version, about = "Exact values and bounds for non-local games")]
struct Cli {
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,

    /// Cap on correlation and predicate table entries.
    #[arg(long, global = true, default_value_t = Limits::default().max_table_entries)]
    max_table_entries: u128,

    /// Cap on deterministic strategies enumerated for classical values.
    #[arg(long, global = true, default_value_t = Limits::default().max_deterministic_strategies)]
    max_strategies: u128,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a game, optionally repeated or thresholded.
    Value {
        game: PathBuf,
        #[arg(long)]
        model: Model,
        /// Number of parallel rounds.
        #[arg(long)]
        repeat: Option<usize>,
        /// Rounds that must be won; needs --repeat.
        #[arg(long, requires = "repeat")]
        threshold: Option<usize>,
        /// Include an optimal strategy.
        #[arg(long)]
        witness: bool,
    },
    /// Membership of a correlation in NS or SNOS.
    Membership {
        correlation: PathBuf,
        #[arg(long)]
        set: Set,
        #[arg(long, default_value = "singles")]
        mode: Mode,
    },
    /// No-signalling correlation dominating a two-player SNOS one.
    Bumpup { correlation: PathBuf },
    /// SNOS strategy close to a joint distribution.
    Reconstruct { inputs: PathBuf },
    /// Evaluate a closed-form bound.
    Bound {
        #[arg(long)]
        name: BoundName,
        /// Comma-separated key=value list, e.g. l=3,delta=0.5,n=4.
        #[arg(long, default_value = "")]
        params: BoundParams,
    },
    /// Check the repetition sandwich and bound domination exactly.
    Verify {
        game: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        model: Model,
        /// Robustness parameter for the full-support bound.
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Built-in games.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print a game document, or a reference strategy with --strategy.
    Export {
        name: String,
        #[arg(long)]
        strategy: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Set {
    Ns,
    Snos,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Singles,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits { max_table_entries: cli.max_table_entries, max_deterministic_strategies: cli.max_strategies };
    let start = Instant::now();
    let name = command_name(&cli.command);
    match run(cli.command, &limits) {
        Ok(Outcome::Raw(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report { input, result, pass }) => {
            let elapsed = cli.timing.then(|| start.elapsed());
            println!("{}", report::render(name, input.as_ref(), result, pass, elapsed));
            if pass == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", report::render_error(name, &e));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Value { .. } => "value",
        Command::Membership { .. } => "membership",
        Command::Bumpup { .. } => "bumpup",
        Command::Reconstruct { .. } => "reconstruct",
        Command::Bound { .. } => "bound",
        Command::Verify { .. } => "verify",
        Command::Catalog { .. } => "catalog",
    }
}

fn run(command: Command, limits: &Limits) -> Result<Outcome, Error> {
    match command {
        Command::Value { game, model, repeat, threshold, witness } => {
            let input = Input::read(&game)?;
            let base = Document::parse(&input.text)?.game()?;
            let game = match (repeat, threshold) {
                (Some(n), Some(t)) => threshold_game_with(&base, t, n, limits)?,
                (Some(n), None) => repeat_game_with(&base, n, limits)?,
                _ => base,
            };
            let result = value_with(&game, model, limits)?;
            let mut body = json!({
                "model": model,
                "repeat": repeat,
                "threshold": threshold,
                "value": result.value,
            });
            if witness {
                body["strategy"] = json!(Document::from_correlation(&result.strategy));
            }
            Ok(Outcome::report(input, body, None))
        }
        Command::Membership { correlation, set, mode } => {
            let input = Input::read(&correlation)?;
            let strategy = Document::parse(&input.text)?.correlation()?;
            let (set_name, mode_value, membership) = match set {
                Set::Snos => ("snos", Value::Null, is_snos(&strategy)),
                Set::Ns => {
                    let mode = match mode {
                        Mode::Singles => NsMode::SinglesComplement,
                        Mode::All => NsMode::AllSubsets,
                    };
                    ("ns", json!(mode), is_ns(&strategy, mode))
                }
            };
            let mut body = json!({ "set": set_name, "mode": mode_value });
            report::merge(&mut body, json!(membership));
            Ok(Outcome::report(input, body, None))
        }
        Command::Bumpup { correlation } => {
            let input = Input::read(&correlation)?;
            let strategy = Document::parse(&input.text)?.correlation()?;
            let bumped = bump_up(&strategy)?;
            let body = json!({
                "dominates_input": bumped.dominates(&strategy),
                "is_ns": is_ns(&bumped, NsMode::AllSubsets).member,
                "strategy": Document::from_correlation(&bumped),
            });
            Ok(Outcome::report(input, body, None))
        }
        Command::Reconstruct { inputs } => {
            let input = Input::read(&inputs)?;
            let resolved = ReconstructDocument::parse(&input.text)?.resolve()?;
            let out = reconstruct_snos(&resolved.target, &resolved.joint, &resolved.certificate)?;
            let within = out.distance <= out.bound;
            let snos = is_snos(&out.strategy).member;
            let ns = (resolved.joint.scenario().players() == 2).then(|| is_ns(&out.strategy, NsMode::AllSubsets).member);
            let body = json!({
                "distance": out.distance,
                "bound": out.bound,
                "within_bound": within,
                "is_snos": snos,
                "is_ns": ns,
                "certificate": resolved.certificate,
                "strategy": Document::from_correlation(&out.strategy),
            });
            let pass = within && snos && ns.unwrap_or(true);
            Ok(Outcome::report(input, body, Some(pass)))
        }
        Command::Bound { name, params } => {
            let value = bounds::evaluate(name, &params)?;
            let mut body = json!({ "name": name, "params": params, "bound": value });
            if let (BoundName::Prefactor, Some(p)) = (name, params.prefactor) {
                body["exponent"] = json!(p.exponent()?.to_string());
            }
            Ok(Outcome::Report { input: None, result: body, pass: None })
        }
        Command::Verify { game, n, model, gamma } => {
            let input = Input::read(&game)?;
            let game = Document::parse(&input.text)?.game()?;
            let sandwich = bounds::verify_sandwich_with(&game, n, model, gamma, limits)?;
            let pass = sandwich.pass;
            Ok(Outcome::report(input, json!(sandwich), Some(pass)))
        }
        Command::Catalog { action: CatalogAction::List } => {
            let entries: Vec<Value> = catalog::catalog()
                .iter()
                .map(|spec| {
                    let s = spec.game.scenario();
                    json!({
                        "name": spec.name,
                        "description": spec.description,
                        "players": s.players(),
                        "inputs": s.inputs(),
                        "outputs": s.outputs(),
                        "strategies": spec.strategies.iter().map(|r| json!({
                            "name": r.name,
                            "class": r.class,
                            "note": r.note,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Outcome::Report { input: None, result: json!({ "games": entries }), pass: None })
        }
        Command::Catalog { action: CatalogAction::Export { name, strategy } } => {
            let spec = catalog::lookup(&name).ok_or_else(|| Error::Argument(format!("no catalog game named {name:?}")))?;
            let doc = match strategy {
                None => Document::from_game(&spec.game),
                Some(s) => {
                    let r = spec
                        .strategies
                        .iter()
                        .find(|r| r.name == s)
                        .ok_or_else(|| Error::Argument(format!("{name} has no reference strategy {s:?}")))?;
                    Document { densities: Some(r.strategy.densities().to_vec()), ..Document::from_game(&spec.game) }
                }
            };
            Ok(Outcome::Raw(doc.to_json()))
        }
    }
}
