//! Built-in games and strategies plus seeded random instances.
//!
//! Random instances use ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, so a seed pins the instance on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Correlation, Game, Scenario};
use crate::polytope::{is_ns, is_snos, NsMode};
use crate::rational::Rational;

/// Three-player anti-correlation game: `T` uniform on `{011, 101, 110}`, and
/// whenever `x_i = x_j = 1` the outputs `a_i`, `a_j` must differ.
pub fn anticorrelation_game() -> Game {
    let scenario = Scenario::binary(3);
    let third = Rational::new(1, 3);
    let distribution = (0..8)
        .map(|x| if [0b011, 0b101, 0b110].contains(&x) { third.clone() } else { Rational::zero() })
        .collect();
    Game::from_fn(scenario, distribution, |a, x| {
        (0..3).all(|i| (i + 1..3).all(|j| !(x[i] == 1 && x[j] == 1) || a[i] != a[j]))
    })
    .expect("valid game")
}

/// A sub-normalized strategy winning [`anticorrelation_game`] with
/// certainty: zero at `111`, `1/8` on every answer when two inputs are `0`,
/// and `δ_{a_i,1−a_j}/4` when exactly `x_i = x_j = 1`.
pub fn example_snos_strategy() -> Correlation {
    Correlation::from_fn(Scenario::binary(3), |a, x| {
        let ones: Vec<usize> = (0..3).filter(|&i| x[i] == 1).collect();
        match ones.len() {
            3 => Rational::zero(),
            2 => {
                if a[ones[0]] != a[ones[1]] {
                    Rational::new(1, 4)
                } else {
                    Rational::zero()
                }
            }
            _ => Rational::new(1, 8),
        }
    })
    .expect("valid strategy")
}

/// CHSH: uniform binary inputs; win iff `a ⊕ b = x ∧ y`.
pub fn chsh_game() -> Game {
    let scenario = Scenario::binary(2);
    Game::from_fn(scenario, vec![Rational::new(1, 4); 4], |a, x| (a[0] ^ a[1]) == (x[0] & x[1])).expect("valid game")
}

/// PR box: `P(ab|xy) = 1/2` iff `a ⊕ b = x ∧ y`.
pub fn pr_box() -> Correlation {
    Correlation::from_fn(Scenario::binary(2), |a, x| {
        if (a[0] ^ a[1]) == (x[0] & x[1]) {
            Rational::new(1, 2)
        } else {
            Rational::zero()
        }
    })
    .expect("valid strategy")
}

/// A seeded random game.
///
/// Draws, in order: for every input tuple (when `full_support` is false) a
/// fair coin deciding whether it is dropped, then an integer weight
/// `k ∈ [1, 2¹⁶]`; then one Bernoulli(`win_probability`) draw per predicate
/// entry in table order. `T(x̲) = k_x̲ / Σk` with the last input taking the
/// exact residual. If every input was dropped the last one is kept.
pub fn random_game(
    seed: u64,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    full_support: bool,
    win_probability: f64,
) -> Result<Game> {
    if !(0.0..=1.0).contains(&win_probability) {
        return Err(Error::argument(format!("win probability {win_probability} outside [0, 1]")));
    }
    let scenario = Scenario::new(inputs, outputs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = scenario.input_count();
    let mut weights: Vec<i64> = (0..nx)
        .map(|_| {
            let dropped = !full_support && rng.random_bool(0.5);
            let k = rng.random_range(1..=1i64 << 16);
            if dropped {
                0
            } else {
                k
            }
        })
        .collect();
    if weights.iter().all(|&k| k == 0) {
        weights[nx - 1] = 1;
    }
    let total: i64 = weights.iter().sum();
    let mut distribution: Vec<Rational> = weights[..nx - 1].iter().map(|&k| Rational::new(k, total)).collect();
    let assigned: Rational = distribution.iter().sum();
    distribution.push(Rational::one() - assigned);
    let predicate = (0..scenario.table_len()).map(|_| rng.random_bool(win_probability)).collect();
    Game::new(scenario, distribution, predicate)
}

/// Convenience wrapper for [`random_game`] with `players` binary players.
pub fn random_binary_game(seed: u64, players: usize, full_support: bool, win_probability: f64) -> Result<Game> {
    random_game(seed, vec![2; players], vec![2; players], full_support, win_probability)
}

/// Random deterministic response tables.
fn random_responses(rng: &mut ChaCha8Rng, scenario: &Scenario) -> Vec<Vec<usize>> {
    scenario
        .inputs()
        .iter()
        .zip(scenario.outputs())
        .map(|(&n, &m)| (0..n).map(|_| rng.random_range(0..m)).collect())
        .collect()
}

/// Vertices used by [`random_ns_correlation`]: deterministic strategies and,
/// when players 0 and 1 are binary, a relabeled PR box on those two players
/// times deterministic answers for the rest.
fn random_vertex(rng: &mut ChaCha8Rng, scenario: &Scenario) -> Correlation {
    let binary_pair = scenario.players() >= 2 && scenario.inputs()[..2] == [2, 2] && scenario.outputs()[..2] == [2, 2];
    let responses = random_responses(rng, scenario);
    if !binary_pair || rng.random_bool(0.5) {
        return Correlation::deterministic(scenario.clone(), &responses).expect("responses fit");
    }
    let flips: [usize; 3] = [rng.random_range(0..2), rng.random_range(0..2), rng.random_range(0..2)];
    let half = Rational::new(1, 2);
    Correlation::from_fn(scenario.clone(), |a, x| {
        let parity = (x[0] & x[1]) ^ (flips[0] & x[0]) ^ (flips[1] & x[1]) ^ flips[2];
        let rest = (2..scenario.players()).all(|i| a[i] == responses[i][x[i]]);
        if rest && (a[0] ^ a[1]) == parity {
            half.clone()
        } else {
            Rational::zero()
        }
    })
    .expect("valid vertex")
}

/// Random weights `k/16`, `k ∈ [1, 16]`, normalized exactly.
fn random_mixture_weights(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..count).map(|_| rng.random_range(1..=16)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|k| Rational::new(k, total)).collect()
}

fn mix(scenario: &Scenario, parts: &[(Rational, Correlation)]) -> Correlation {
    let mut densities = vec![Rational::zero(); scenario.table_len()];
    for (w, p) in parts {
        for (d, v) in densities.iter_mut().zip(p.densities()) {
            if !v.is_zero() {
                *d += w * v;
            }
        }
    }
    Correlation::new(scenario.clone(), densities).expect("nonnegative mixture")
}

/// A random NS correlation: a mixture of up to four random vertices.
pub fn random_ns_correlation(seed: u64, scenario: &Scenario) -> Correlation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=4);
    let weights = random_mixture_weights(&mut rng, count);
    let parts: Vec<(Rational, Correlation)> =
        weights.into_iter().map(|w| (w, random_vertex(&mut rng, scenario))).collect();
    mix(scenario, &parts)
}

/// A random SNOS correlation: a random NS correlation with every entry
/// scaled by an independent factor `k/4`, `k ∈ [0, 4]`.
pub fn random_snos_correlation(seed: u64, scenario: &Scenario) -> Correlation {
    let base = random_ns_correlation(seed, scenario);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    let densities = base.densities().iter().map(|v| v * &Rational::new(rng.random_range(0..=4), 4)).collect();
    Correlation::new(scenario.clone(), densities).expect("nonnegative")
}

/// A random nonnegative table with entries `k/(4|A̲|)`, `k ∈ [0, 6]`; often
/// just outside SNOS.
pub fn random_correlation(seed: u64, scenario: &Scenario) -> Correlation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = 4 * scenario.output_count() as i64;
    let densities = (0..scenario.table_len()).map(|_| Rational::new(rng.random_range(0..=6), denom)).collect();
    Correlation::new(scenario.clone(), densities).expect("nonnegative")
}

/// The strategy class a reference strategy belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyClass {
    Ns,
    Snos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceStrategy {
    pub name: &'static str,
    pub class: StrategyClass,
    pub note: &'static str,
    pub strategy: Correlation,
}

impl ReferenceStrategy {
    pub fn check(&self) -> bool {
        match self.class {
            StrategyClass::Ns => is_ns(&self.strategy, NsMode::AllSubsets).member,
            StrategyClass::Snos => is_snos(&self.strategy).member,
        }
    }
}

/// A named catalog entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub game: Game,
    pub strategies: Vec<ReferenceStrategy>,
}

/// Every built-in game, by name.
pub fn catalog() -> Vec<GameSpec> {
    let all_win = |g: &Game| g.with_predicate(vec![true; g.scenario().table_len()]).expect("same shape");
    let chsh = chsh_game();
    vec![
        GameSpec {
            name: "a3",
            description: "three-player anti-correlation game, T uniform on {011,101,110}",
            game: anticorrelation_game(),
            strategies: vec![ReferenceStrategy {
                name: "frustrated",
                class: StrategyClass::Snos,
                note: "wins with certainty, zero mass on input 111",
                strategy: example_snos_strategy(),
            }],
        },
        GameSpec {
            name: "chsh",
            description: "two-player CHSH game, uniform inputs, win iff a xor b = x and y",
            game: chsh.clone(),
            strategies: vec![ReferenceStrategy {
                name: "pr-box",
                class: StrategyClass::Ns,
                note: "wins with certainty",
                strategy: pr_box(),
            }],
        },
        GameSpec {
            name: "trivial",
            description: "CHSH inputs with every answer winning",
            game: all_win(&chsh),
            strategies: Vec::new(),
        },
    ]
}

pub fn lookup(name: &str) -> Option<GameSpec> {
    catalog().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::SubsetIndex;

    #[test]
    fn reference_strategies_pass_their_checks() {
        for spec in catalog() {
            for s in &spec.strategies {
                assert!(s.check(), "{} / {}", spec.name, s.name);
                assert_eq!(spec.game.winning_probability(&s.strategy).unwrap(), Rational::one());
            }
        }
    }

    #[test]
    fn example_strategy_pair_marginal() {
        let m = example_snos_strategy().marginal(&SubsetIndex::new(3, &[0, 1]).unwrap()).unwrap();
        // x = 110, outputs (a_0, a_1) in order 00, 01, 10, 11
        let got: Vec<Rational> = (0..4).map(|a| m.get(a, 0b110).clone()).collect();
        let half = Rational::new(1, 2);
        assert_eq!(got, vec![Rational::zero(), half.clone(), half, Rational::zero()]);
    }

    #[test]
    fn random_game_is_seeded() {
        let a = random_binary_game(7, 2, true, 0.5).unwrap();
        assert_eq!(a, random_binary_game(7, 2, true, 0.5).unwrap());
        assert_ne!(a, random_binary_game(8, 2, true, 0.5).unwrap());
        assert!(a.has_full_support());
        let all = random_binary_game(3, 3, false, 1.0).unwrap();
        assert!(all.predicate().iter().all(|&w| w));
        assert!(random_game(1, vec![2], vec![2], true, 1.5).is_err());
    }

    #[test]
    fn random_correlations_have_declared_class() {
        for seed in 0..30 {
            for players in [2, 3] {
                let s = Scenario::binary(players);
                assert!(is_ns(&random_ns_correlation(seed, &s), NsMode::AllSubsets).member);
                assert!(is_snos(&random_snos_correlation(seed, &s)).member);
            }
        }
    }
}
