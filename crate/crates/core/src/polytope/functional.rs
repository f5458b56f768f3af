use crate::error::{Error, Result};
use crate::game::{check_distribution, JointDistribution, SubsetIndex};
use crate::lp::{lp_solve, LpProblem, Relation, Sense};
use crate::rational::Rational;

/// `F(P, Q) = Σ √(P·Q)`.
pub fn fidelity(p: &[Rational], q: &[Rational]) -> Result<f64> {
    let p: Vec<f64> = p.iter().map(Rational::to_f64).collect();
    let q: Vec<f64> = q.iter().map(Rational::to_f64).collect();
    fidelity_f64(&p, &q)
}

pub fn fidelity_f64(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::shape("fidelity of distributions on different sets"));
    }
    if p.iter().chain(q).any(|&v| v < 0.0) {
        return Err(Error::argument("fidelity needs nonnegative inputs"));
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum())
}

/// `½‖P − Q‖₁`, exact.
pub fn trace_distance(p: &[Rational], q: &[Rational]) -> Result<Rational> {
    if p.len() != q.len() {
        return Err(Error::shape("trace distance of distributions on different sets"));
    }
    let l1: Rational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok(l1 * Rational::new(1, 2))
}

/// Result of [`marginal_consistency_distance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyDistance {
    pub subset: SubsetIndex,
    /// `min_R ½‖T·R − Q_{A_I X̲}‖₁`.
    pub distance: Rational,
    /// Minimizing `R(a_I|x_I)`, indexed by `x_I·|A_I| + a_I`.
    pub conditional: Vec<Rational>,
}

fn check_pair(joint: &JointDistribution, distribution: &[Rational]) -> Result<()> {
    if distribution.len() != joint.scenario().input_count() {
        return Err(Error::shape("query distribution does not match the joint table"));
    }
    check_distribution(distribution, "query distribution")
}

/// `min over conditionals R_{A_I|X_I}` of `½‖T·R − Q_{A_I X̲}‖₁`, one small
/// LP per `x_I`.
pub fn marginal_consistency_distance(
    joint: &JointDistribution,
    distribution: &[Rational],
    subset: &SubsetIndex,
) -> Result<ConsistencyDistance> {
    check_pair(joint, distribution)?;
    let scenario = joint.scenario();
    let outputs = scenario.subset_output_count(subset);
    let marginal = joint.subset_marginal(subset);
    let xi = scenario.input_projection(subset);
    let mut by_block: Vec<Vec<usize>> = vec![Vec::new(); scenario.subset_input_count(subset)];
    for x in 0..scenario.input_count() {
        by_block[xi[x]].push(x);
    }
    let half = Rational::new(1, 2);
    let mut distance = Rational::zero();
    let mut conditional = Vec::with_capacity(outputs * by_block.len());
    for inputs in &by_block {
        // Variables: R(a) for each a_I, then u(a, x) for each (a_I, x̲ in block).
        let n = outputs + outputs * inputs.len();
        let mut objective = vec![Rational::zero(); n];
        for v in &mut objective[outputs..] {
            *v = half.clone();
        }
        let mut lp = LpProblem::new(Sense::Minimize, objective);
        let simplex: Vec<_> = (0..outputs).map(|a| (a, Rational::one())).collect();
        lp.add_sparse(&simplex, Relation::Eq, Rational::one());
        for (k, &x) in inputs.iter().enumerate() {
            let t = &distribution[x];
            for a in 0..outputs {
                let u = outputs + k * outputs + a;
                let q = &marginal[x * outputs + a];
                lp.add_sparse(&[(u, Rational::one()), (a, -t)], Relation::Ge, -q);
                lp.add_sparse(&[(u, Rational::one()), (a, t.clone())], Relation::Ge, q.clone());
            }
        }
        let (value, witness) = lp_solve(&lp)?.into_optimum()?;
        distance += value;
        conditional.extend_from_slice(&witness[..outputs]);
    }
    Ok(ConsistencyDistance { subset: *subset, distance, conditional })
}

/// `Q ∈ P_ε`: every non-empty strict subset has consistency distance `≤ ε`.
pub fn p_epsilon_membership(joint: &JointDistribution, distribution: &[Rational], epsilon: &Rational) -> Result<bool> {
    Ok(max_consistency_distance(joint, distribution)? <= *epsilon)
}

/// `max_{∅≠I⊊[ℓ]}` of [`marginal_consistency_distance`] (zero for one player).
pub fn max_consistency_distance(joint: &JointDistribution, distribution: &[Rational]) -> Result<Rational> {
    let mut worst = Rational::zero();
    for subset in SubsetIndex::nonempty_strict(joint.scenario().players()) {
        worst = worst.max(marginal_consistency_distance(joint, distribution, &subset)?.distance);
    }
    Ok(worst)
}

/// `F̃(Q) = min_{∅≠I⊊[ℓ]} max_R F(T·R, Q_{A_I X̲})`.
///
/// For fixed `x_I` the inner maximum over `R(·|x_I)` is attained at
/// `R ∝ c²` with `c(a_I, x_I) = Σ_{x_{I^c}} √(T(x̲) Q(a_I, x̲))`, contributing
/// `√(Σ_{a_I} c²)`.
pub fn tilde_fidelity(joint: &JointDistribution, distribution: &[Rational]) -> Result<f64> {
    check_pair(joint, distribution)?;
    let scenario = joint.scenario();
    let t: Vec<f64> = distribution.iter().map(Rational::to_f64).collect();
    let mut best = f64::INFINITY;
    for subset in SubsetIndex::nonempty_strict(scenario.players()) {
        let c = fidelity_weights(joint, &t, &subset);
        let outputs = scenario.subset_output_count(&subset);
        let value: f64 = c.chunks(outputs).map(|row| row.iter().map(|v| v * v).sum::<f64>().sqrt()).sum();
        best = best.min(value);
    }
    // One player: no non-empty strict subset constrains anything.
    Ok(if best.is_finite() { best } else { 1.0 })
}

/// `c(a_I, x_I)`, indexed by `x_I·|A_I| + a_I`.
pub fn fidelity_weights(joint: &JointDistribution, distribution: &[f64], subset: &SubsetIndex) -> Vec<f64> {
    let scenario = joint.scenario();
    let outputs = scenario.subset_output_count(subset);
    let marginal = joint.subset_marginal(subset);
    let xi = scenario.input_projection(subset);
    let mut c = vec![0.0; outputs * scenario.subset_input_count(subset)];
    for x in 0..scenario.input_count() {
        for a in 0..outputs {
            let q = marginal[x * outputs + a].to_f64();
            c[xi[x] * outputs + a] += (distribution[x] * q).sqrt();
        }
    }
    c
}
