//! Exact NS, SNOS and classical values.
//!
//! The NS and SNOS values are linear programs over the correlation table,
//! restricted to points that are constant on the orbits of the local
//! relabelings fixing the game. The SNOS program additionally drops every
//! entry outside `supp T × {V = 1}`: SNOS is closed under lowering entries, so
//! an optimum supported there always exists. Every witness is expanded back
//! to a full table and re-checked by the membership tests before it is
//! returned.

mod classical;
mod symmetry;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Correlation, Game, Limits, SubsetIndex};
use crate::lp::{lp_solve, LpProblem, Relation, Sense};
use crate::polytope::{is_ns, is_snos, NsMode};
use crate::rational::Rational;

pub use classical::{value_classical, value_classical_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ns,
    Snos,
    Classical,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Ns => "ns",
            Model::Snos => "snos",
            Model::Classical => "classical",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ns" => Ok(Model::Ns),
            "snos" => Ok(Model::Snos),
            "classical" => Ok(Model::Classical),
            other => Err(Error::argument(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueResult {
    pub model: Model,
    pub value: Rational,
    /// An optimal strategy of the model's class.
    pub strategy: Correlation,
}

pub fn value(game: &Game, model: Model) -> Result<ValueResult> {
    value_with(game, model, &Limits::default())
}

pub fn value_with(game: &Game, model: Model, limits: &Limits) -> Result<ValueResult> {
    match model {
        Model::Ns => value_ns_with(game, limits),
        Model::Snos => value_snos_with(game, limits),
        Model::Classical => value_classical_with(game, limits),
    }
}

/// `ω_NS(G)`. The program constrains the marginals on `[ℓ]∖{i}` only; the
/// witness is checked against every strict subset.
pub fn value_ns(game: &Game) -> Result<ValueResult> {
    value_ns_with(game, &Limits::default())
}

pub fn value_ns_with(game: &Game, limits: &Limits) -> Result<ValueResult> {
    let program = Program::ns(game, limits)?;
    let (value, strategy) = program.solve(game)?;
    let report = is_ns(&strategy, NsMode::AllSubsets);
    if !report.member {
        return Err(Error::Internal(format!("NS witness failed verification: {:?}", report.violation)));
    }
    finish(game, Model::Ns, value, strategy)
}

/// `ω_SNOS(G)`.
pub fn value_snos(game: &Game) -> Result<ValueResult> {
    value_snos_with(game, &Limits::default())
}

pub fn value_snos_with(game: &Game, limits: &Limits) -> Result<ValueResult> {
    let program = Program::snos(game, limits)?;
    let (value, strategy) = program.solve(game)?;
    let report = is_snos(&strategy);
    if !report.member {
        return Err(Error::Internal(format!("SNOS witness failed verification: {:?}", report.violation)));
    }
    finish(game, Model::Snos, value, strategy)
}

fn finish(game: &Game, model: Model, value: Rational, strategy: Correlation) -> Result<ValueResult> {
    let achieved = game.winning_probability(&strategy)?;
    if achieved != value {
        return Err(Error::Internal(format!("{model} witness wins with {achieved}, LP optimum is {value}")));
    }
    Ok(ValueResult { model, value, strategy })
}

/// A sparse constraint: terms, relation, right-hand side.
type Row = (Vec<(usize, Rational)>, Relation, Rational);

/// A value LP over raw variables (`P` entries, then `M_I` blocks), before
/// orbit reduction.
struct Program {
    entries: usize,
    included: Vec<bool>,
    subsets: Vec<SubsetIndex>,
    offsets: Vec<usize>,
    total: usize,
    rows: Vec<Row>,
}

impl Program {
    fn layout(game: &Game, subsets: Vec<SubsetIndex>) -> (Vec<usize>, usize) {
        let scenario = game.scenario();
        let mut offsets = Vec::with_capacity(subsets.len());
        let mut total = scenario.table_len();
        for s in &subsets {
            offsets.push(total);
            total += scenario.subset_output_count(s) * scenario.subset_input_count(s);
        }
        (offsets, total)
    }

    fn ns(game: &Game, limits: &Limits) -> Result<Self> {
        let scenario = game.scenario();
        limits.check_table("strategy table", scenario.table_len() as u128)?;
        let players = scenario.players();
        let subsets: Vec<SubsetIndex> = if players > 1 {
            (0..players).map(|i| SubsetIndex::all_but(players, i)).collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        let (offsets, total) = Self::layout(game, subsets.clone());
        let na = scenario.output_count();
        let one = Rational::one();
        let mut rows = Vec::new();
        for x in 0..scenario.input_count() {
            let terms = (0..na).map(|a| (scenario.entry(a, x), one.clone())).collect();
            rows.push((terms, Relation::Eq, one.clone()));
        }
        for (s, subset) in subsets.iter().enumerate() {
            for (m, mut terms) in marginal_rows(game, subset, |_| true) {
                terms.push((offsets[s] + m, -&one));
                rows.push((terms, Relation::Eq, Rational::zero()));
            }
        }
        Ok(Program {
            entries: scenario.table_len(),
            included: vec![true; scenario.table_len()],
            subsets,
            offsets,
            total,
            rows,
        })
    }

    fn snos(game: &Game, limits: &Limits) -> Result<Self> {
        let scenario = game.scenario();
        limits.check_table("strategy table", scenario.table_len() as u128)?;
        let na = scenario.output_count();
        let included: Vec<bool> = (0..scenario.table_len())
            .map(|e| game.predicate()[e] && game.query_probability(e / na).is_positive())
            .collect();
        let subsets: Vec<SubsetIndex> = SubsetIndex::nonempty_strict(scenario.players()).collect();
        let (offsets, total) = Self::layout(game, subsets.clone());
        let one = Rational::one();
        let mut rows = Vec::new();
        for x in 0..scenario.input_count() {
            let terms: Vec<_> = (0..na)
                .map(|a| scenario.entry(a, x))
                .filter(|&e| included[e])
                .map(|e| (e, one.clone()))
                .collect();
            if !terms.is_empty() {
                rows.push((terms, Relation::Le, one.clone()));
            }
        }
        for (s, subset) in subsets.iter().enumerate() {
            let outputs = scenario.subset_output_count(subset);
            let mut used = vec![false; scenario.subset_input_count(subset)];
            for (m, mut terms) in marginal_rows(game, subset, |e| included[e]) {
                if terms.is_empty() {
                    continue;
                }
                used[m / outputs] = true;
                terms.push((offsets[s] + m, -&one));
                rows.push((terms, Relation::Le, Rational::zero()));
            }
            for (block, _) in used.iter().enumerate().filter(|(_, &u)| u) {
                let terms = (0..outputs).map(|a| (offsets[s] + block * outputs + a, one.clone())).collect();
                rows.push((terms, Relation::Le, one.clone()));
            }
        }
        Ok(Program { entries: scenario.table_len(), included, subsets, offsets, total, rows })
    }

    /// Solves the orbit-reduced program and expands the witness.
    fn solve(&self, game: &Game) -> Result<(Rational, Correlation)> {
        let orbits = symmetry::orbits(game, &self.subsets, &self.offsets, self.total);
        // Compact LP columns for orbits that actually occur.
        let mut column: HashMap<usize, usize> = HashMap::new();
        let mut next = 0;
        let mut col = |v: usize, column: &mut HashMap<usize, usize>| -> usize {
            *column.entry(orbits.orbit[v]).or_insert_with(|| {
                next += 1;
                next - 1
            })
        };
        let mut objective_terms: Vec<(usize, Rational)> = Vec::new();
        let na = game.scenario().output_count();
        for e in 0..self.entries {
            if self.included[e] {
                let c = col(e, &mut column);
                if game.predicate()[e] {
                    objective_terms.push((c, game.query_probability(e / na).clone()));
                }
            }
        }
        let mut reduced: Vec<Row> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (terms, rel, rhs) in &self.rows {
            let mut acc: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
            for (v, c) in terms {
                acc.push((col(*v, &mut column), c.clone()));
            }
            let row = combine(acc);
            if row.is_empty() {
                continue;
            }
            let key = (row.clone(), *rel, rhs.clone());
            if seen.insert(key) {
                reduced.push((row, *rel, rhs.clone()));
            }
        }
        let mut objective = vec![Rational::zero(); next];
        for (c, t) in objective_terms {
            objective[c] += t;
        }
        let mut lp = LpProblem::new(Sense::Maximize, objective);
        for (row, rel, rhs) in reduced {
            lp.add_sparse(&row, rel, rhs);
        }
        let (value, witness) = lp_solve(&lp)?.into_optimum()?;
        let densities = (0..self.entries)
            .map(|e| match column.get(&orbits.orbit[e]) {
                Some(&c) if self.included[e] => witness[c].clone(),
                _ => Rational::zero(),
            })
            .collect();
        Ok((value, Correlation::new(game.scenario().clone(), densities)?))
    }
}

/// Sorts by column and merges duplicates, dropping zeros.
fn combine(mut terms: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    terms.sort_by_key(|(c, _)| *c);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
    for (c, v) in terms {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// For each `(x̲, a_I)`: the index `x_I·|A_I| + a_I` and the terms
/// `Σ_{a_{I^c}} P(a̲|x̲)` over entries passing `keep`.
fn marginal_rows(
    game: &Game,
    subset: &SubsetIndex,
    keep: impl Fn(usize) -> bool,
) -> Vec<(usize, Vec<(usize, Rational)>)> {
    let scenario = game.scenario();
    let outputs = scenario.subset_output_count(subset);
    let proj = scenario.output_projection(subset);
    let xi = scenario.input_projection(subset);
    let na = scenario.output_count();
    let mut out = Vec::with_capacity(scenario.input_count() * outputs);
    for x in 0..scenario.input_count() {
        let mut groups: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); outputs];
        for a in 0..na {
            let e = scenario.entry(a, x);
            if keep(e) {
                groups[proj[a]].push((e, Rational::one()));
            }
        }
        for (ai, terms) in groups.into_iter().enumerate() {
            out.push((xi[x] * outputs + ai, terms));
        }
    }
    out
}

#[cfg(test)]
mod tests;
