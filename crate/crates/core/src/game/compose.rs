//! Parallel repetition, threshold games, and round symmetrization.

use crate::error::{Error, Result};
use crate::game::{Correlation, Game, Limits, Radix, Rounds, Scenario};
use crate::rational::Rational;

/// `Gⁿ` and `G^{t/n}` share everything but the final thresholding of
/// per-entry round-win counts.
fn round_counts(game: &Game, n: usize, limits: &Limits) -> Result<(Scenario, Vec<Rational>, Vec<u32>)> {
    if n == 0 {
        return Err(Error::argument("number of repetitions must be at least 1"));
    }
    let required = (game.scenario().table_len() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    limits.check_table("repeated game table", required)?;

    let base = game.scenario();
    let mut scenario = base.clone();
    let mut distribution = game.distribution().to_vec();
    let mut counts: Vec<u32> = game.predicate().iter().map(|&w| w as u32).collect();
    for _ in 1..n {
        let next = scenario.round_product(base)?;
        let xmap = scenario.round_product_map(base, false);
        let amap = scenario.round_product_map(base, true);
        let (nx, na) = (base.input_count(), base.output_count());
        let mut dist = vec![Rational::zero(); next.input_count()];
        let mut cnt = vec![0u32; next.table_len()];
        for x1 in 0..scenario.input_count() {
            for x2 in 0..nx {
                let x = xmap[x1 * nx + x2];
                dist[x] = &distribution[x1] * game.query_probability(x2);
                for a1 in 0..scenario.output_count() {
                    let c1 = counts[scenario.entry(a1, x1)];
                    for a2 in 0..na {
                        let a = amap[a1 * na + a2];
                        cnt[next.entry(a, x)] = c1 + game.wins(a2, x2) as u32;
                    }
                }
            }
        }
        scenario = next;
        distribution = dist;
        counts = cnt;
    }
    Ok((scenario, distribution, counts))
}

/// `Gⁿ`: product distribution `T^{⊗n}`, product predicate `V^{⊗n}`.
pub fn repeat_game(game: &Game, n: usize) -> Result<Game> {
    repeat_game_with(game, n, &Limits::default())
}

pub fn repeat_game_with(game: &Game, n: usize, limits: &Limits) -> Result<Game> {
    let (scenario, distribution, counts) = round_counts(game, n, limits)?;
    let predicate = counts.iter().map(|&c| c as usize == n).collect();
    let rounds = Rounds { base: game.scenario().clone(), count: n };
    Ok(Game::new(scenario, distribution, predicate)?.with_rounds(rounds))
}

/// `G^{t/n}`: win iff at least `t` of the `n` rounds are won.
pub fn threshold_game(game: &Game, t: usize, n: usize) -> Result<Game> {
    threshold_game_with(game, t, n, &Limits::default())
}

pub fn threshold_game_with(game: &Game, t: usize, n: usize, limits: &Limits) -> Result<Game> {
    if t > n {
        return Err(Error::argument(format!("threshold {t} exceeds the {n} rounds")));
    }
    let (scenario, distribution, counts) = round_counts(game, n, limits)?;
    let predicate = counts.iter().map(|&c| c as usize >= t).collect();
    let rounds = Rounds { base: game.scenario().clone(), count: n };
    Ok(Game::new(scenario, distribution, predicate)?.with_rounds(rounds))
}

fn exact_root(value: usize, n: usize) -> Option<usize> {
    let guess = (value as f64).powf(1.0 / n as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&b| b >= 1 && b.checked_pow(n as u32) == Some(value))
}

/// The single-round scenario whose `n`-fold round product is `scenario`.
pub fn round_base(scenario: &Scenario, n: usize) -> Result<Scenario> {
    if n == 0 {
        return Err(Error::argument("number of rounds must be at least 1"));
    }
    let root = |sizes: &[usize]| -> Result<Vec<usize>> {
        sizes
            .iter()
            .map(|&s| {
                exact_root(s, n).ok_or_else(|| Error::shape(format!("alphabet size {s} is not an {n}-th power")))
            })
            .collect()
    };
    Scenario::new(root(scenario.inputs())?, root(scenario.outputs())?)
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else { break };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// For a player alphabet of size `base^n`, the relabeling induced by moving
/// round `r` to round `perm[r]`.
pub(crate) fn round_permutation_map(base: usize, n: usize, perm: &[usize]) -> Vec<usize> {
    let radix = Radix::new(vec![base; n]);
    let mut out = vec![0; n];
    (0..radix.len())
        .map(|v| {
            let digits = radix.decode(v);
            for (r, &d) in digits.iter().enumerate() {
                out[perm[r]] = d;
            }
            radix.encode(&out)
        })
        .collect()
}

/// Maps every `(a̲, x̲)` entry of an `n`-round scenario through the same round
/// permutation applied to every player.
pub(crate) fn round_permutation_entries(scenario: &Scenario, base: &Scenario, n: usize, perm: &[usize]) -> Vec<usize> {
    let players = scenario.players();
    let in_maps: Vec<Vec<usize>> = (0..players).map(|i| round_permutation_map(base.inputs()[i], n, perm)).collect();
    let out_maps: Vec<Vec<usize>> = (0..players).map(|i| round_permutation_map(base.outputs()[i], n, perm)).collect();
    let (ir, or) = (scenario.input_radix(), scenario.output_radix());
    let mut xs = vec![0; players];
    let mut as_ = vec![0; players];
    let x_image: Vec<usize> = (0..scenario.input_count())
        .map(|x| {
            ir.decode_into(x, &mut xs);
            for i in 0..players {
                xs[i] = in_maps[i][xs[i]];
            }
            ir.encode(&xs)
        })
        .collect();
    let a_image: Vec<usize> = (0..scenario.output_count())
        .map(|a| {
            or.decode_into(a, &mut as_);
            for i in 0..players {
                as_[i] = out_maps[i][as_[i]];
            }
            or.encode(&as_)
        })
        .collect();
    let na = scenario.output_count();
    (0..scenario.table_len()).map(|e| scenario.entry(a_image[e % na], x_image[e / na])).collect()
}

/// Average of `P∘π` over all `n!` simultaneous round permutations `π`.
pub fn symmetrize(strategy: &Correlation, n: usize) -> Result<Correlation> {
    let scenario = strategy.scenario();
    let base = round_base(scenario, n)?;
    let perms = permutations(n);
    let weight = Rational::new(1, perms.len() as i64);
    let mut acc = vec![Rational::zero(); scenario.table_len()];
    for perm in &perms {
        let image = round_permutation_entries(scenario, &base, n, perm);
        for (e, p) in strategy.densities().iter().enumerate() {
            if !p.is_zero() {
                acc[image[e]] += p;
            }
        }
    }
    for v in &mut acc {
        *v *= &weight;
    }
    Correlation::from_signed(scenario.clone(), acc)
}

/// Relabels players: player `perm[i]` of the result plays the role of player
/// `i` of `scenario`.
fn player_permutation_entries(scenario: &Scenario, perm: &[usize]) -> Result<(Scenario, Vec<usize>)> {
    let players = scenario.players();
    let mut seen = vec![false; players];
    if perm.len() != players || perm.iter().any(|&p| p >= players || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::argument("not a permutation of the players"));
    }
    let mut inputs = vec![0; players];
    let mut outputs = vec![0; players];
    for i in 0..players {
        inputs[perm[i]] = scenario.inputs()[i];
        outputs[perm[i]] = scenario.outputs()[i];
    }
    let target = Scenario::new(inputs, outputs)?;
    let (ir, or) = (scenario.input_radix(), scenario.output_radix());
    let (tir, tor) = (target.input_radix(), target.output_radix());
    let mut buf = vec![0; players];
    let mut moved = vec![0; players];
    let mut relabel = |radix: &Radix, target: &Radix, v: usize| {
        radix.decode_into(v, &mut buf);
        for i in 0..players {
            moved[perm[i]] = buf[i];
        }
        target.encode(&moved)
    };
    let xs: Vec<usize> = (0..scenario.input_count()).map(|x| relabel(&ir, &tir, x)).collect();
    let as_: Vec<usize> = (0..scenario.output_count()).map(|a| relabel(&or, &tor, a)).collect();
    let na = scenario.output_count();
    let map = (0..scenario.table_len()).map(|e| target.entry(as_[e % na], xs[e / na])).collect();
    Ok((target, map))
}

impl Game {
    /// Same game with players renamed; see [`Correlation::permute_players`].
    pub fn permute_players(&self, perm: &[usize]) -> Result<Game> {
        let (target, map) = player_permutation_entries(self.scenario(), perm)?;
        let na = self.scenario().output_count();
        let nat = target.output_count();
        let mut distribution = vec![Rational::zero(); target.input_count()];
        let mut predicate = vec![false; target.table_len()];
        for (e, &img) in map.iter().enumerate() {
            predicate[img] = self.predicate()[e];
            if e % na == 0 {
                distribution[img / nat] = self.query_probability(e / na).clone();
            }
        }
        Game::new(target, distribution, predicate)
    }
}

impl Correlation {
    /// Player `perm[i]` of the result is player `i` of `self`.
    pub fn permute_players(&self, perm: &[usize]) -> Result<Correlation> {
        let (target, map) = player_permutation_entries(self.scenario(), perm)?;
        let mut densities = vec![Rational::zero(); target.table_len()];
        for (e, &img) in map.iter().enumerate() {
            densities[img] = self.densities()[e].clone();
        }
        Correlation::from_signed(target, densities)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chsh() -> Game {
        Game::from_fn(Scenario::binary(2), vec![Rational::new(1, 4); 4], |a, x| (a[0] ^ a[1]) == (x[0] & x[1])).unwrap()
    }

    #[test]
    fn repeat_once_is_identity() {
        let g = chsh();
        let g1 = repeat_game(&g, 1).unwrap();
        assert_eq!(g1.predicate(), g.predicate());
        assert_eq!(g1.distribution(), g.distribution());
    }

    #[test]
    fn threshold_full_equals_repeat() {
        let g = chsh();
        assert_eq!(threshold_game(&g, 2, 2).unwrap().predicate(), repeat_game(&g, 2).unwrap().predicate());
        assert!(threshold_game(&g, 0, 2).unwrap().predicate().iter().all(|&w| w));
        assert!(matches!(threshold_game(&g, 3, 2), Err(Error::Argument(_))));
    }

    #[test]
    fn cap_is_enforced_with_size() {
        let limits = Limits { max_table_entries: 1000, ..Limits::default() };
        match repeat_game_with(&chsh(), 3, &limits) {
            Err(Error::Resource { required, .. }) => assert_eq!(required, 4096),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn product_strategy_wins_with_product_probability() {
        let g = chsh();
        let p = Correlation::uniform(Scenario::binary(2));
        let p2 = p.tensor(&p).unwrap();
        let w = g.winning_probability(&p).unwrap();
        assert_eq!(repeat_game(&g, 2).unwrap().winning_probability(&p2).unwrap(), &w * &w);
    }

    #[test]
    fn permutations_in_order() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn symmetrize_two_rounds_is_swap_average() {
        let s = Scenario::binary(2);
        let p = Correlation::deterministic(s.clone(), &[vec![0, 1], vec![0, 0]]).unwrap();
        let q = Correlation::deterministic(s, &[vec![1, 1], vec![0, 1]]).unwrap();
        let pq = p.tensor(&q).unwrap();
        let qp = q.tensor(&p).unwrap();
        let half = Rational::new(1, 2);
        let expect: Vec<Rational> =
            pq.densities().iter().zip(qp.densities()).map(|(a, b)| (a + b) * &half).collect();
        assert_eq!(symmetrize(&pq, 2).unwrap().densities(), &expect[..]);
    }

    #[test]
    fn symmetrize_rejects_non_products() {
        let s = Scenario::new(vec![3, 2], vec![2, 2]).unwrap();
        assert!(matches!(symmetrize(&Correlation::zero(s), 2), Err(Error::Shape(_))));
    }
}
