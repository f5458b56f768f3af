use serde::Serialize;

use crate::error::Result;
use crate::game::{Correlation, Scenario, SubsetIndex};
use crate::lp::{lp_solve, LpProblem, Relation, Sense};
use crate::rational::Rational;

/// A table `M_I(a_I, x_I) ≥ 0`, indexed by `x_I·|A_I| + a_I`.
///
/// Membership witnesses are exact probability distributions per `x_I`; the
/// raw output of [`minimal_dominating_marginal`] may be sub-normalized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarginalBound {
    pub subset: SubsetIndex,
    /// `|A_I|`.
    pub outputs: usize,
    pub table: Vec<Rational>,
}

impl MarginalBound {
    pub fn get(&self, subset_outputs: usize, subset_inputs: usize) -> &Rational {
        &self.table[subset_inputs * self.outputs + subset_outputs]
    }

    /// `Σ_{a_I} M_I(a_I, x_I)` for every `x_I`.
    pub fn masses(&self) -> Vec<Rational> {
        self.table.chunks(self.outputs).map(|row| row.iter().sum()).collect()
    }

    /// Adds each row's deficit to its first entry so every row sums to 1.
    /// Rows already above 1 are left alone.
    pub fn padded(mut self) -> Self {
        let one = Rational::one();
        for row in self.table.chunks_mut(self.outputs) {
            let mass: Rational = row.iter().sum();
            if mass < one {
                row[0] += &one - &mass;
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NegativeDensity { outputs: usize, inputs: usize, value: Rational },
    /// `Σ_a̲ P(a̲|x̲) ≠ 1` (NS) or `> 1` (SNOS).
    Normalization { inputs: usize, mass: Rational },
    /// `Σ_{a_I} max_{x_{I^c}} P(a_I|x̲) > 1` at `x_I`.
    DominatorExcess { subset: SubsetIndex, subset_inputs: usize, mass: Rational },
    /// `P(a_I|x̲) ≠ P(a_I|x̲')` although `x̲` and `x̲'` agree on `I`.
    Signalling {
        subset: SubsetIndex,
        subset_outputs: usize,
        inputs: usize,
        other_inputs: usize,
        value: Rational,
        other_value: Rational,
    },
}

impl Violation {
    pub fn subset(&self) -> Option<SubsetIndex> {
        match self {
            Violation::DominatorExcess { subset, .. } | Violation::Signalling { subset, .. } => Some(*subset),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    /// Populated iff `member`.
    pub witnesses: Vec<MarginalBound>,
    /// Populated iff not `member`.
    pub violation: Option<Violation>,
}

impl MembershipReport {
    fn accept(witnesses: Vec<MarginalBound>) -> Self {
        MembershipReport { member: true, witnesses, violation: None }
    }

    fn reject(violation: Violation) -> Self {
        MembershipReport { member: false, witnesses: Vec::new(), violation: Some(violation) }
    }
}

/// Which subsets `I` an NS check enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NsMode {
    /// `I = ∅` and `I = [ℓ]∖{i}`; the remaining conditions are implied.
    #[default]
    SinglesComplement,
    AllSubsets,
}

/// `M_I(a_I, x_I) = max_{x_{I^c}} P(a_I|x̲)`, the pointwise smallest table
/// dominating the `I`-marginal.
pub fn minimal_dominating_marginal(strategy: &Correlation, subset: &SubsetIndex) -> Result<MarginalBound> {
    let scenario = strategy.scenario();
    let marginal = strategy.marginal(subset)?;
    let outputs = scenario.subset_output_count(subset);
    let xi = scenario.input_projection(subset);
    let mut table: Vec<Option<Rational>> = vec![None; outputs * scenario.subset_input_count(subset)];
    for x in 0..scenario.input_count() {
        for a in 0..outputs {
            let v = marginal.get(a, x);
            let slot = &mut table[xi[x] * outputs + a];
            match slot {
                Some(cur) if *cur >= *v => {}
                _ => *slot = Some(v.clone()),
            }
        }
    }
    Ok(MarginalBound {
        subset: *subset,
        outputs,
        table: table.into_iter().map(|v| v.unwrap_or_default()).collect(),
    })
}

fn first_negative(strategy: &Correlation) -> Option<Violation> {
    let na = strategy.scenario().output_count();
    strategy.densities().iter().position(Rational::is_negative).map(|e| Violation::NegativeDensity {
        outputs: e % na,
        inputs: e / na,
        value: strategy.densities()[e].clone(),
    })
}

/// Sub-no-signalling membership, checked over every strict subset `I`
/// including `∅` (sub-normalization per input).
pub fn is_snos(strategy: &Correlation) -> MembershipReport {
    if let Some(v) = first_negative(strategy) {
        return MembershipReport::reject(v);
    }
    let players = strategy.scenario().players();
    let one = Rational::one();
    let mut witnesses = Vec::new();
    for subset in SubsetIndex::all_strict(players) {
        let bound = minimal_dominating_marginal(strategy, &subset).expect("subset matches scenario");
        for (xi, mass) in bound.masses().into_iter().enumerate() {
            if mass > one {
                return MembershipReport::reject(if subset.is_empty() {
                    Violation::Normalization { inputs: argmax_mass(strategy), mass }
                } else {
                    Violation::DominatorExcess { subset, subset_inputs: xi, mass }
                });
            }
        }
        witnesses.push(bound.padded());
    }
    MembershipReport::accept(witnesses)
}

fn argmax_mass(strategy: &Correlation) -> usize {
    let mut best = (0, Rational::zero());
    for x in 0..strategy.scenario().input_count() {
        let m = strategy.total_mass(x);
        if x == 0 || m > best.1 {
            best = (x, m);
        }
    }
    best.0
}

/// No-signalling membership: normalized per input and every checked
/// `I`-marginal independent of `x_{I^c}`.
pub fn is_ns(strategy: &Correlation, mode: NsMode) -> MembershipReport {
    if let Some(v) = first_negative(strategy) {
        return MembershipReport::reject(v);
    }
    let scenario = strategy.scenario();
    for x in 0..scenario.input_count() {
        let mass = strategy.total_mass(x);
        if !mass.is_one() {
            return MembershipReport::reject(Violation::Normalization { inputs: x, mass });
        }
    }
    let players = scenario.players();
    let subsets: Vec<SubsetIndex> = match mode {
        NsMode::SinglesComplement => std::iter::once(SubsetIndex::empty(players))
            .chain(SubsetIndex::singles_complement(players).filter(|s| !s.is_empty()))
            .collect(),
        NsMode::AllSubsets => SubsetIndex::all_strict(players).collect(),
    };
    let mut witnesses = Vec::new();
    for subset in subsets {
        match local_marginal(strategy, scenario, &subset) {
            Ok(bound) => witnesses.push(bound),
            Err(v) => return MembershipReport::reject(v),
        }
    }
    MembershipReport::accept(witnesses)
}

/// The common value of `P(a_I|x̲)` over `x_{I^c}`, or the first disagreement.
fn local_marginal(strategy: &Correlation, scenario: &Scenario, subset: &SubsetIndex) -> Result<MarginalBound, Violation> {
    let marginal = strategy.marginal(subset).expect("subset matches scenario");
    let outputs = scenario.subset_output_count(subset);
    let xi = scenario.input_projection(subset);
    let mut representative: Vec<Option<usize>> = vec![None; scenario.subset_input_count(subset)];
    let mut table = vec![Rational::zero(); outputs * representative.len()];
    for x in 0..scenario.input_count() {
        match representative[xi[x]] {
            None => {
                representative[xi[x]] = Some(x);
                for a in 0..outputs {
                    table[xi[x] * outputs + a] = marginal.get(a, x).clone();
                }
            }
            Some(rep) => {
                for a in 0..outputs {
                    if marginal.get(a, x) != marginal.get(a, rep) {
                        return Err(Violation::Signalling {
                            subset: *subset,
                            subset_outputs: a,
                            inputs: rep,
                            other_inputs: x,
                            value: marginal.get(a, rep).clone(),
                            other_value: marginal.get(a, x).clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(MarginalBound { subset: *subset, outputs, table })
}

/// SNOS membership decided as LP feasibility: do conditional distributions
/// `Q_I(·|x_I)` exist with `P(a_I|x̲) ≤ Q_I(a_I|x_I)` for every strict `I`?
///
/// Independent of the closed form in [`is_snos`]; used to cross-check it.
pub fn snos_feasible_by_lp(strategy: &Correlation) -> Result<bool> {
    if first_negative(strategy).is_some() {
        return Ok(false);
    }
    let scenario = strategy.scenario();
    let players = scenario.players();
    let mut offsets = Vec::new();
    let mut count = 0;
    for subset in SubsetIndex::all_strict(players) {
        offsets.push((subset, count));
        count += scenario.subset_output_count(&subset) * scenario.subset_input_count(&subset);
    }
    let mut lp = LpProblem::new(Sense::Maximize, vec![Rational::zero(); count]);
    for &(subset, offset) in &offsets {
        let outputs = scenario.subset_output_count(&subset);
        let marginal = strategy.marginal(&subset)?;
        let xi = scenario.input_projection(&subset);
        for x in 0..scenario.input_count() {
            for a in 0..outputs {
                let v = marginal.get(a, x);
                if v.is_positive() {
                    lp.add_sparse(&[(offset + xi[x] * outputs + a, Rational::one())], Relation::Ge, v.clone());
                }
            }
        }
        for s in 0..scenario.subset_input_count(&subset) {
            let terms: Vec<_> = (0..outputs).map(|a| (offset + s * outputs + a, Rational::one())).collect();
            lp.add_sparse(&terms, Relation::Eq, Rational::one());
        }
    }
    Ok(lp_solve(&lp)?.is_optimal())
}
