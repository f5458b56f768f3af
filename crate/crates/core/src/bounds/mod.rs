//! Closed-form repetition and concentration bounds, the polynomial
//! prefactors of the de Finetti reductions, and a harness comparing the
//! bounds with exactly computed values.
//!
//! Bounds are evaluated in binary64. An exact value `v` passes against a
//! bound `b` when `v`, rounded toward `+∞`, is at most `b + 1e-12`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{repeat_game_with, Game, Limits};
use crate::rational::Rational;
use crate::values::{value_with, Model};

/// Absolute slack allowed when an exact value is compared with a bound.
pub const PASS_TOLERANCE: f64 = 1e-12;

/// Whether a bound controls `ω(Gⁿ)` via a gap `δ` or `ω(G^{t/n})` via a
/// margin `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Repetition,
    Concentration,
}

/// `C_ℓ = 2^{ℓ+1} − 3`.
pub fn c_ell(players: usize) -> Result<u64> {
    if players == 0 || players > 60 {
        return Err(Error::argument(format!("player count {players} outside [1, 60]")));
    }
    Ok((1u64 << (players + 1)) - 3)
}

fn unit(name: &str, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::argument(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(v)
}

fn powi(base: f64, n: u64) -> f64 {
    base.powf(n as f64)
}

/// `(1 − δ²/(5C_ℓ²))ⁿ`.
pub fn bound_thm1_repetition(delta: f64, players: usize, n: u64) -> Result<f64> {
    let c = c_ell(players)? as f64;
    let delta = unit("delta", delta)?;
    Ok(powi(1.0 - delta * delta / (5.0 * c * c), n))
}

/// `exp(−nα²/(5C_ℓ²))`.
pub fn bound_thm1_concentration(alpha: f64, players: usize, n: u64) -> Result<f64> {
    let c = c_ell(players)? as f64;
    let alpha = unit("alpha", alpha)?;
    Ok((-(n as f64) * alpha * alpha / (5.0 * c * c)).exp())
}

/// The full-support NS bounds: [`bound_thm1_repetition`] or
/// [`bound_thm1_concentration`] with `C_ℓ(Γ+1)` in place of `C_ℓ`.
pub fn bound_cor1(kind: BoundKind, parameter: f64, gamma: f64, players: usize, n: u64) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::argument(format!("gamma = {gamma} must be finite and nonnegative")));
    }
    let c = c_ell(players)? as f64 * (gamma + 1.0);
    let p = unit(kind_parameter(kind), parameter)?;
    let rate = p * p / (5.0 * c * c);
    Ok(match kind {
        BoundKind::Repetition => powi(1.0 - rate, n),
        BoundKind::Concentration => (-(n as f64) * rate).exp(),
    })
}

/// Two-player NS bounds `(1 − δ²/27)ⁿ` and `exp(−nα²/33)`.
pub fn bound_thm3(kind: BoundKind, parameter: f64, n: u64) -> Result<f64> {
    let p = unit(kind_parameter(kind), parameter)?;
    Ok(match kind {
        BoundKind::Repetition => powi(1.0 - p * p / 27.0, n),
        BoundKind::Concentration => (-(n as f64) * p * p / 33.0).exp(),
    })
}

fn kind_parameter(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::Repetition => "delta",
        BoundKind::Concentration => "alpha",
    }
}

/// The two terms of the split estimate before the prefactor is removed,
/// with slack coefficient `slack` (`2C_ℓ` in general, `5` for two players):
/// `(1 − δ + slack·ε)ⁿ` and `(1 − ε²)ⁿ`, or `exp(−2n(α − slack·ε)²)` and
/// `exp(−nε²)`.
fn split_terms(kind: BoundKind, parameter: f64, slack: f64, n: u64, epsilon: f64) -> Result<(f64, f64)> {
    let p = unit(kind_parameter(kind), parameter)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::argument(format!("epsilon = {epsilon} outside [0, 1)")));
    }
    let tail = powi(1.0 - epsilon * epsilon, n);
    Ok(match kind {
        BoundKind::Repetition => (powi(1.0 - p + slack * epsilon, n), tail),
        BoundKind::Concentration => {
            let gap = p - slack * epsilon;
            if gap < 0.0 {
                return Err(Error::argument(format!("epsilon = {epsilon} exceeds alpha/slack = {}", p / slack)));
            }
            ((-2.0 * n as f64 * gap * gap).exp(), (-(n as f64) * epsilon * epsilon).exp())
        }
    })
}

/// Split estimate with slack `2C_ℓ`. For concentration the second term is
/// `exp(−nε²)`.
pub fn split_bound(kind: BoundKind, parameter: f64, players: usize, n: u64, epsilon: f64) -> Result<(f64, f64)> {
    let c = c_ell(players)? as f64;
    split_terms(kind, parameter, 2.0 * c, n, epsilon)
}

/// Split estimate for two players, slack `5`.
pub fn split_bound_two_player(kind: BoundKind, parameter: f64, n: u64, epsilon: f64) -> Result<(f64, f64)> {
    split_terms(kind, parameter, 5.0, n, epsilon)
}

/// The slack that balances the two split terms:
/// `C_ℓ(√(1 + δ/C_ℓ²) − 1)` or `(4C_ℓ − √2)α/(8C_ℓ² − 1)`.
pub fn balanced_epsilon(kind: BoundKind, parameter: f64, players: usize) -> Result<f64> {
    let c = c_ell(players)? as f64;
    let p = unit(kind_parameter(kind), parameter)?;
    Ok(match kind {
        BoundKind::Repetition => c * ((1.0 + p / (c * c)).sqrt() - 1.0),
        BoundKind::Concentration => (4.0 * c - 2f64.sqrt()) * p / (8.0 * c * c - 1.0),
    })
}

/// Two-player choices `(√29 − 5)δ/2` and `(10 − √2)α/49`.
pub fn two_player_epsilon(kind: BoundKind, parameter: f64) -> Result<f64> {
    let p = unit(kind_parameter(kind), parameter)?;
    Ok(match kind {
        BoundKind::Repetition => (29f64.sqrt() - 5.0) * p / 2.0,
        BoundKind::Concentration => (10.0 - 2f64.sqrt()) * p / 49.0,
    })
}

/// Alphabet data for the de Finetti prefactors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Prefactor {
    /// Conditional distributions `P_{Bⁿ|Yⁿ}`: `(n+1)^{|B||Y|}`.
    Conditional { outputs: u64, inputs: u64 },
    /// Fidelity-weighted reduction on `Zⁿ`: `(n+1)^{3|Z|²}`.
    Constrained { alphabet: u64 },
    /// SNOS reduction: `(n+1)^{3|A̲|²|X̲|² + 2|A̲||X̲|}`.
    Snos { outputs: u64, inputs: u64 },
}

impl Prefactor {
    pub fn exponent(&self) -> Result<u128> {
        let check = |v: u64| if v == 0 { Err(Error::argument("alphabet sizes must be positive")) } else { Ok(v as u128) };
        Ok(match *self {
            Prefactor::Conditional { outputs, inputs } => check(outputs)? * check(inputs)?,
            Prefactor::Constrained { alphabet } => 3 * check(alphabet)?.pow(2),
            Prefactor::Snos { outputs, inputs } => {
                let ax = check(outputs)? * check(inputs)?;
                3 * ax * ax + 2 * ax
            }
        })
    }
}

/// `(n+1)^exponent`; may be `+∞` in binary64.
pub fn definetti_prefactor(prefactor: &Prefactor, n: u64) -> Result<f64> {
    let e = prefactor.exponent()?;
    Ok(((n + 1) as f64).powf(e as f64))
}

/// Named bound formulas, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundName {
    Thm1Rep,
    Thm1Conc,
    Cor1,
    Thm3,
    Split,
    Prefactor,
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "thm1-rep" => BoundName::Thm1Rep,
            "thm1-conc" => BoundName::Thm1Conc,
            "cor1" => BoundName::Cor1,
            "thm3" => BoundName::Thm3,
            "split" => BoundName::Split,
            "prefactor" => BoundName::Prefactor,
            other => return Err(Error::argument(format!("unknown bound {other:?}"))),
        })
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundName::Thm1Rep => "thm1-rep",
            BoundName::Thm1Conc => "thm1-conc",
            BoundName::Cor1 => "cor1",
            BoundName::Thm3 => "thm3",
            BoundName::Split => "split",
            BoundName::Prefactor => "prefactor",
        })
    }
}

/// Parameters for a bound evaluation, parsed from `key=value,...`.
///
/// Keys: `l` (players), `n`, `t`, `delta`, `alpha`, `gamma`, `epsilon`, and
/// for prefactors `kind` (`conditional`, `constrained`, `snos`) with
/// `outputs`, `inputs` or `alphabet`. Where `delta` or `alpha` is optional
/// the one given selects repetition or concentration.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub players: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<Prefactor>,
}

impl FromStr for BoundParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut raw = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::argument(format!("parameter {part:?} is not key=value")))?;
            if raw.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::argument(format!("parameter {k:?} given twice")));
            }
        }
        fn take<T: FromStr>(raw: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
            raw.remove(key)
                .map(|v| v.parse().map_err(|_| Error::argument(format!("cannot parse {key}={v}"))))
                .transpose()
        }
        let mut p = BoundParams {
            players: take(&mut raw, "l")?,
            n: take(&mut raw, "n")?,
            t: take(&mut raw, "t")?,
            delta: take(&mut raw, "delta")?,
            alpha: take(&mut raw, "alpha")?,
            gamma: take(&mut raw, "gamma")?,
            epsilon: take(&mut raw, "epsilon")?,
            prefactor: None,
        };
        if let Some(kind) = raw.remove("kind") {
            let mut size = |key: &str| -> Result<u64> {
                take(&mut raw, key)?.ok_or_else(|| Error::argument(format!("prefactor kind {kind} needs {key}")))
            };
            p.prefactor = Some(match kind.as_str() {
                "conditional" => Prefactor::Conditional { outputs: size("outputs")?, inputs: size("inputs")? },
                "constrained" => Prefactor::Constrained { alphabet: size("alphabet")? },
                "snos" => Prefactor::Snos { outputs: size("outputs")?, inputs: size("inputs")? },
                other => return Err(Error::argument(format!("unknown prefactor kind {other:?}"))),
            });
        }
        if let Some(k) = raw.keys().next() {
            return Err(Error::argument(format!("unknown parameter {k:?}")));
        }
        Ok(p)
    }
}

impl BoundParams {
    fn need<T: Copy>(v: Option<T>, key: &str) -> Result<T> {
        v.ok_or_else(|| Error::argument(format!("missing parameter {key}")))
    }

    /// The gap or margin given, and which kind of bound it selects.
    fn kind(&self) -> Result<(BoundKind, f64)> {
        match (self.delta, self.alpha) {
            (Some(d), None) => Ok((BoundKind::Repetition, d)),
            (None, Some(a)) => Ok((BoundKind::Concentration, a)),
            _ => Err(Error::argument("give exactly one of delta and alpha")),
        }
    }

    /// With `t` given, concentration needs `t ≥ (1 − δ + α)n`.
    fn check_threshold(&self) -> Result<()> {
        if let (Some(t), Some(delta), Some(alpha), Some(n)) = (self.t, self.delta, self.alpha, self.n) {
            if (t as f64) < (1.0 - delta + alpha) * n as f64 {
                return Err(Error::argument(format!("t = {t} is below (1 - delta + alpha) n")));
            }
        }
        Ok(())
    }
}

/// Evaluates a named bound. `split` returns the sum of its two terms; see
/// [`split_bound`] for them separately.
pub fn evaluate(name: BoundName, params: &BoundParams) -> Result<f64> {
    let n = || BoundParams::need(params.n, "n");
    let players = || BoundParams::need(params.players, "l");
    match name {
        BoundName::Thm1Rep => bound_thm1_repetition(BoundParams::need(params.delta, "delta")?, players()?, n()?),
        BoundName::Thm1Conc => {
            check_alpha_range(params)?;
            bound_thm1_concentration(BoundParams::need(params.alpha, "alpha")?, players()?, n()?)
        }
        BoundName::Cor1 => {
            let (kind, p) = params.kind().or_else(|_| concentration_with_delta(params))?;
            bound_cor1(kind, p, BoundParams::need(params.gamma, "gamma")?, players()?, n()?)
        }
        BoundName::Thm3 => {
            let (kind, p) = params.kind().or_else(|_| concentration_with_delta(params))?;
            bound_thm3(kind, p, n()?)
        }
        BoundName::Split => {
            let (kind, p) = params.kind().or_else(|_| concentration_with_delta(params))?;
            let l = players()?;
            let eps = match params.epsilon {
                Some(e) => e,
                None => balanced_epsilon(kind, p, l)?,
            };
            let (a, b) = split_bound(kind, p, l, n()?, eps)?;
            Ok(a + b)
        }
        BoundName::Prefactor => {
            definetti_prefactor(&BoundParams::need(params.prefactor, "kind")?, n()?)
        }
    }
}

/// Both `delta` and `alpha` given: a concentration bound in `alpha`, after
/// checking `α ≤ δ` and the threshold.
fn concentration_with_delta(params: &BoundParams) -> Result<(BoundKind, f64)> {
    check_alpha_range(params)?;
    match params.alpha {
        Some(a) if params.delta.is_some() => Ok((BoundKind::Concentration, a)),
        _ => Err(Error::argument("give delta (repetition) or alpha (concentration)")),
    }
}

fn check_alpha_range(params: &BoundParams) -> Result<()> {
    if let (Some(a), Some(d)) = (params.alpha, params.delta) {
        if a > d {
            return Err(Error::argument(format!("alpha = {a} exceeds delta = {d}")));
        }
    }
    params.check_threshold()
}

/// A bound next to the exact value it must dominate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    pub params: BoundParams,
    pub bound: f64,
    pub value: Option<Rational>,
    pub pass: bool,
}

impl BoundReport {
    pub fn new(name: BoundName, params: BoundParams, bound: f64, value: Option<Rational>) -> Self {
        let pass = value.as_ref().is_none_or(|v| dominated(v, bound));
        BoundReport { name, params, bound, value, pass }
    }
}

/// `v ≤ bound + 1e-12`, with `v` rounded toward `+∞`.
pub fn dominated(value: &Rational, bound: f64) -> bool {
    value.to_f64_up() <= bound + PASS_TOLERANCE
}

/// Exact check of `ω(G)ⁿ ≤ ω(Gⁿ) ≤ ω(G)`, plus the applicable bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub model: Model,
    pub n: usize,
    pub single: Rational,
    pub repeated: Rational,
    /// `ω(G)ⁿ`.
    pub power: Rational,
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub bounds: Vec<BoundReport>,
    pub pass: bool,
}

/// Computes `ω_X(G)` and `ω_X(Gⁿ)` exactly and checks the sandwich. Bound
/// reports: for SNOS the general repetition bound with `δ = 1 − ω_SNOS(G)`;
/// for NS with two players the two-player bound with `δ = 1 − ω_NS(G)`, and
/// with `gamma` given and `T` of full support the full-support NS bound.
pub fn verify_sandwich(game: &Game, n: usize, model: Model, gamma: Option<f64>) -> Result<SandwichReport> {
    verify_sandwich_with(game, n, model, gamma, &Limits::default())
}

pub fn verify_sandwich_with(
    game: &Game,
    n: usize,
    model: Model,
    gamma: Option<f64>,
    limits: &Limits,
) -> Result<SandwichReport> {
    let repeated_game = repeat_game_with(game, n, limits)?;
    let single = value_with(game, model, limits)?.value;
    let repeated = value_with(&repeated_game, model, limits)?.value;
    let power = single.pow(n as u32);
    let lower_holds = power <= repeated;
    let upper_holds = repeated <= single;
    let delta = (Rational::one() - &single).to_f64().clamp(0.0, 1.0);
    let players = game.players();
    let rounds = n as u64;
    let params = BoundParams { players: Some(players), n: Some(rounds), delta: Some(delta), ..Default::default() };
    let mut bounds = Vec::new();
    match model {
        Model::Snos => {
            let b = bound_thm1_repetition(delta, players, rounds)?;
            bounds.push(BoundReport::new(BoundName::Thm1Rep, params, b, Some(repeated.clone())));
        }
        Model::Ns => {
            if players == 2 {
                let b = bound_thm3(BoundKind::Repetition, delta, rounds)?;
                bounds.push(BoundReport::new(BoundName::Thm3, params.clone(), b, Some(repeated.clone())));
            }
            if let Some(g) = gamma.filter(|_| game.has_full_support()) {
                let b = bound_cor1(BoundKind::Repetition, delta, g, players, rounds)?;
                let params = BoundParams { gamma: Some(g), ..params };
                bounds.push(BoundReport::new(BoundName::Cor1, params, b, Some(repeated.clone())));
            }
        }
        Model::Classical => {}
    }
    let pass = lower_holds && upper_holds && bounds.iter().all(|b| b.pass);
    Ok(SandwichReport { model, n, single, repeated, power, lower_holds, upper_holds, bounds, pass })
}

#[cfg(test)]
mod tests;
