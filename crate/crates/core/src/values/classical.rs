use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::game::{Correlation, Game, Limits};
use crate::rational::Rational;
use crate::values::{Model, ValueResult};

/// `ω_C(G)`: the best deterministic strategy, by exhaustive enumeration.
///
/// Strategies are visited in lexicographic order of the response tables
/// (player 0's answer to input 0 most significant) and only strict
/// improvements are kept, so ties go to the smallest table. The last
/// player's table is optimized per input given the others, which visits the
/// same maxima as a full sweep.
pub fn value_classical(game: &Game) -> Result<ValueResult> {
    value_classical_with(game, &Limits::default())
}

pub fn value_classical_with(game: &Game, limits: &Limits) -> Result<ValueResult> {
    let scenario = game.scenario();
    let required = scenario
        .inputs()
        .iter()
        .zip(scenario.outputs())
        .try_fold(1u128, |acc, (&n, &m)| (m as u128).checked_pow(n as u32).and_then(|p| acc.checked_mul(p)))
        .unwrap_or(u128::MAX);
    if required > limits.max_deterministic_strategies {
        return Err(Error::Resource {
            what: "deterministic strategies",
            required,
            cap: limits.max_deterministic_strategies,
        });
    }
    let weights = Weights::new(game);
    let players = scenario.players();
    let last = players - 1;
    let (ir, or) = (scenario.input_radix(), scenario.output_radix());
    let support: Vec<(usize, Vec<usize>)> = game.support().map(|x| (x, ir.decode(x))).collect();
    let (n_last, m_last) = (scenario.inputs()[last], scenario.outputs()[last]);

    let mut tables: Vec<Vec<usize>> = scenario.inputs().iter().map(|&n| vec![0; n]).collect();
    let mut best: Option<(Score, Vec<Vec<usize>>)> = None;
    let mut answer = vec![0; players];
    loop {
        // score[x_last][a_last] given the other players' tables
        let mut score = vec![vec![weights.zero(); m_last]; n_last];
        for (x, xs) in &support {
            for i in 0..last {
                answer[i] = tables[i][xs[i]];
            }
            for a in 0..m_last {
                answer[last] = a;
                if game.wins(or.encode(&answer), *x) {
                    weights.add(&mut score[xs[last]][a], *x);
                }
            }
        }
        let mut total = weights.zero();
        for (x_last, row) in score.iter().enumerate() {
            let mut arg = 0;
            for a in 1..m_last {
                if row[a] > row[arg] {
                    arg = a;
                }
            }
            tables[last][x_last] = arg;
            weights.accumulate(&mut total, &row[arg]);
        }
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, tables.clone()));
        }
        if !advance(&mut tables[..last], &scenario.outputs()[..last]) {
            break;
        }
    }
    let (score, responses) = best.expect("at least one strategy");
    let strategy = Correlation::deterministic(scenario.clone(), &responses)?;
    let value = weights.to_rational(&score);
    debug_assert_eq!(game.winning_probability(&strategy)?, value);
    Ok(ValueResult { model: Model::Classical, value, strategy })
}

/// Next response tables in lexicographic order; `false` after the last.
fn advance(tables: &mut [Vec<usize>], outputs: &[usize]) -> bool {
    for (table, &m) in tables.iter_mut().zip(outputs).rev() {
        for slot in table.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                return true;
            }
            *slot = 0;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Score {
    Int(u64),
    Exact(Rational),
}

/// Query weights as integers over a common denominator when that fits in
/// `u64`, exact rationals otherwise.
enum Weights<'a> {
    Int { weights: Vec<u64>, denom: u64 },
    Exact(&'a [Rational]),
}

impl<'a> Weights<'a> {
    fn new(game: &'a Game) -> Self {
        let t = game.distribution();
        let denom = t.iter().fold(BigInt::one(), |acc, r| acc.lcm(&r.denom()));
        if let Some(d) = denom.to_u64() {
            let weights: Option<Vec<u64>> =
                t.iter().map(|r| (r.numer() * (&denom / r.denom())).to_u64()).collect();
            if let Some(weights) = weights {
                return Weights::Int { weights, denom: d };
            }
        }
        Weights::Exact(t)
    }

    fn zero(&self) -> Score {
        match self {
            Weights::Int { .. } => Score::Int(0),
            Weights::Exact(_) => Score::Exact(Rational::zero()),
        }
    }

    fn add(&self, score: &mut Score, x: usize) {
        match (self, score) {
            (Weights::Int { weights, .. }, Score::Int(s)) => *s += weights[x],
            (Weights::Exact(t), Score::Exact(s)) => *s += &t[x],
            _ => unreachable!("score kind matches weights"),
        }
    }

    fn accumulate(&self, total: &mut Score, part: &Score) {
        match (total, part) {
            (Score::Int(s), Score::Int(p)) => *s += p,
            (Score::Exact(s), Score::Exact(p)) => *s += p,
            _ => unreachable!("score kind matches weights"),
        }
    }

    fn to_rational(&self, score: &Score) -> Rational {
        match (self, score) {
            (Weights::Int { denom, .. }, Score::Int(s)) => {
                Rational::from_bigints(BigInt::from(*s), BigInt::from(*denom))
            }
            (_, Score::Exact(s)) => s.clone(),
            _ => unreachable!("score kind matches weights"),
        }
    }
}
