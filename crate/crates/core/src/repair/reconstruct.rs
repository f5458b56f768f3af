use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{check_distribution, Correlation, JointDistribution, Radix, Scenario, SubsetIndex};
use crate::polytope::{is_ns, is_snos, marginal_consistency_distance, trace_distance, NsMode};
use crate::rational::Rational;
use crate::repair::coupling::adjust_digit;

/// Data for multi-marginal reconstruction.
///
/// The blocks are modelled as the "players" of `blocks`: block `j` has input
/// alphabet `Z_j` and output alphabet `B_j`. `joint` is `P` on `B̲ × Z̲`,
/// `target` is `T` on `Z̲`, and `marginals[j]` is `Q(b_j|z_j)` indexed
/// `z_j·|B_j| + b_j`. Construction checks `½‖P_Z̲ − T‖₁ ≤ ε₀` and
/// `½‖P_{B_j Z̲} − T·Q_j‖₁ ≤ ε_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionProblem {
    joint: JointDistribution,
    target: Vec<Rational>,
    marginals: Vec<Vec<Rational>>,
    input_tolerance: Rational,
    tolerances: Vec<Rational>,
}

/// Output of [`reconstruct_multi_marginal`] and [`reconstruct_snos`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    /// `P′`.
    pub strategy: Correlation,
    /// `½‖T·P′ − P‖₁`.
    pub distance: Rational,
    /// The guaranteed bound `ε₀ + Σ 2ε_j`.
    pub bound: Rational,
}

fn check_conditional(table: &[Rational], outputs: usize, what: &str) -> Result<()> {
    for (z, row) in table.chunks(outputs).enumerate() {
        check_distribution(row, &format!("{what} at input {z}"))?;
    }
    Ok(())
}

/// `P_{B_j Z̲}` indexed `z̲·|B_j| + b_j`.
fn block_marginal(joint: &JointDistribution, block: usize) -> Vec<Rational> {
    let scenario = joint.scenario();
    let radix = scenario.output_radix();
    let size = scenario.outputs()[block];
    let stride: usize = radix.sizes()[block + 1..].iter().product();
    let na = scenario.output_count();
    let mut out = vec![Rational::zero(); size * scenario.input_count()];
    for (e, p) in joint.entries().iter().enumerate() {
        if !p.is_zero() {
            out[(e / na) * size + (e % na / stride) % size] += p;
        }
    }
    out
}

impl ReconstructionProblem {
    pub fn new(
        joint: JointDistribution,
        target: Vec<Rational>,
        marginals: Vec<Vec<Rational>>,
        input_tolerance: Rational,
        tolerances: Vec<Rational>,
    ) -> Result<Self> {
        let (input, actual) = Self::distances(&joint, &target, &marginals)?;
        if tolerances.len() != marginals.len() {
            return Err(Error::shape("one tolerance per block is required"));
        }
        if input > input_tolerance {
            return Err(Error::argument(format!(
                "input marginal is at distance {input} from the target, above the tolerance {input_tolerance}"
            )));
        }
        for (j, (d, eps)) in actual.iter().zip(&tolerances).enumerate() {
            if d > eps {
                return Err(Error::argument(format!("block {j} is at distance {d}, above its tolerance {eps}")));
            }
        }
        Ok(ReconstructionProblem { joint, target, marginals, input_tolerance, tolerances })
    }

    /// Uses the exact distances as tolerances.
    pub fn with_exact_tolerances(
        joint: JointDistribution,
        target: Vec<Rational>,
        marginals: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let (input, actual) = Self::distances(&joint, &target, &marginals)?;
        Self::new(joint, target, marginals, input, actual)
    }

    fn distances(
        joint: &JointDistribution,
        target: &[Rational],
        marginals: &[Vec<Rational>],
    ) -> Result<(Rational, Vec<Rational>)> {
        let blocks = joint.scenario();
        if target.len() != blocks.input_count() {
            return Err(Error::shape("target does not match the block inputs"));
        }
        check_distribution(target, "target distribution")?;
        if marginals.len() != blocks.players() {
            return Err(Error::shape(format!(
                "{} local conditionals for {} blocks",
                marginals.len(),
                blocks.players()
            )));
        }
        let input = trace_distance(&joint.input_marginal(), target)?;
        let ir = blocks.input_radix();
        let mut actual = Vec::with_capacity(marginals.len());
        for (j, q) in marginals.iter().enumerate() {
            let (nz, nb) = (blocks.inputs()[j], blocks.outputs()[j]);
            if q.len() != nz * nb {
                return Err(Error::shape(format!("block {j} conditional has {} entries, expected {}", q.len(), nz * nb)));
            }
            check_conditional(q, nb, &format!("block {j} conditional"))?;
            let observed = block_marginal(joint, j);
            let mut l1 = Rational::zero();
            for z in 0..blocks.input_count() {
                let zj = ir.decode(z)[j];
                for b in 0..nb {
                    l1 += (&observed[z * nb + b] - &target[z] * &q[zj * nb + b]).abs();
                }
            }
            actual.push(l1 * Rational::new(1, 2));
        }
        Ok((input, actual))
    }

    pub fn blocks(&self) -> &Scenario {
        self.joint.scenario()
    }

    pub fn joint(&self) -> &JointDistribution {
        &self.joint
    }

    pub fn target(&self) -> &[Rational] {
        &self.target
    }

    pub fn marginals(&self) -> &[Vec<Rational>] {
        &self.marginals
    }

    pub fn input_tolerance(&self) -> &Rational {
        &self.input_tolerance
    }

    pub fn tolerances(&self) -> &[Rational] {
        &self.tolerances
    }

    /// `ε₀ + Σ_j 2ε_j`.
    pub fn bound(&self) -> Rational {
        let two = Rational::from_integer(2);
        self.tolerances.iter().fold(self.input_tolerance.clone(), |acc, e| acc + &two * e)
    }
}

/// Conditional `P′(·|z̲)` over a block radix: the conditional of `row`
/// (or the product of the local targets when `row` has no mass), with each
/// block's marginal replaced in turn by its target.
fn reconstruct_row(row: Vec<Rational>, radix: &Radix, targets: &[&[Rational]]) -> Vec<Rational> {
    let mass: Rational = row.iter().sum();
    let mut dist: Vec<Rational> = if mass.is_zero() {
        let mut digits = vec![0; targets.len()];
        (0..radix.len())
            .map(|b| {
                radix.decode_into(b, &mut digits);
                digits.iter().zip(targets).map(|(&d, t)| t[d].clone()).product()
            })
            .collect()
    } else {
        row.into_iter().map(|p| p / &mass).collect()
    };
    for (j, t) in targets.iter().enumerate() {
        dist = adjust_digit(&dist, radix, j, t);
    }
    dist
}

fn half_l1_to_joint(target: &[Rational], strategy: &Correlation, joint: &JointDistribution) -> Result<Rational> {
    let achieved = strategy.joint_with(target)?;
    trace_distance(&achieved, joint.entries())
}

/// Builds `P′` with every block marginal `P′(b_j|z̲) = Q(b_j|z_j)` and
/// `½‖T·P′ − P‖₁ ≤ ε₀ + Σ 2ε_j`, coupling one block at a time in block order.
pub fn reconstruct_multi_marginal(problem: &ReconstructionProblem) -> Result<Reconstruction> {
    let blocks = problem.blocks();
    let radix = blocks.output_radix();
    let ir = blocks.input_radix();
    let na = blocks.output_count();
    let mut densities = Vec::with_capacity(blocks.table_len());
    for z in 0..blocks.input_count() {
        let zs = ir.decode(z);
        let targets: Vec<&[Rational]> = problem
            .marginals
            .iter()
            .enumerate()
            .map(|(j, q)| &q[zs[j] * blocks.outputs()[j]..][..blocks.outputs()[j]])
            .collect();
        let row = problem.joint.entries()[z * na..][..na].to_vec();
        densities.extend(reconstruct_row(row, &radix, &targets));
    }
    let strategy = Correlation::new(blocks.clone(), densities)?;
    let distance = half_l1_to_joint(&problem.target, &strategy, &problem.joint)?;
    Ok(Reconstruction { strategy, distance, bound: problem.bound() })
}

/// A local conditional `Q(a_I|x_I)` (indexed `x_I·|A_I| + a_I`) with the
/// claimed `ε_I ≥ ½‖P_{A_I X̲} − T·Q_I‖₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalMarginal {
    pub subset: SubsetIndex,
    pub conditional: Vec<Rational>,
    pub epsilon: Rational,
}

/// Approximate no-signalling data for [`reconstruct_snos`]: `ε_∅` bounds
/// `½‖P_X̲ − T‖₁`, and one [`LocalMarginal`] per non-empty strict subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnosCertificate {
    pub input_epsilon: Rational,
    pub marginals: Vec<LocalMarginal>,
}

impl SnosCertificate {
    /// The smallest tolerances: optimal local conditionals from
    /// [`marginal_consistency_distance`].
    pub fn tight(joint: &JointDistribution, target: &[Rational]) -> Result<Self> {
        let input_epsilon = trace_distance(&joint.input_marginal(), target)?;
        let marginals = SubsetIndex::nonempty_strict(joint.scenario().players())
            .map(|subset| {
                let d = marginal_consistency_distance(joint, target, &subset)?;
                Ok(LocalMarginal { subset, conditional: d.conditional, epsilon: d.distance })
            })
            .collect::<Result<_>>()?;
        Ok(SnosCertificate { input_epsilon, marginals })
    }

    /// `ε_∅ + Σ_{I≠∅} 2ε_I`.
    pub fn bound(&self) -> Rational {
        let two = Rational::from_integer(2);
        self.marginals.iter().fold(self.input_epsilon.clone(), |acc, m| acc + &two * &m.epsilon)
    }

    /// Checks every claimed tolerance against the exact distance and returns
    /// the conditionals in ascending subset-mask order.
    pub fn verify(&self, joint: &JointDistribution, target: &[Rational]) -> Result<Vec<&LocalMarginal>> {
        let scenario = joint.scenario();
        if target.len() != scenario.input_count() {
            return Err(Error::shape("target does not match the joint table"));
        }
        check_distribution(target, "target distribution")?;
        let actual = trace_distance(&joint.input_marginal(), target)?;
        if actual > self.input_epsilon {
            return Err(Error::Certificate {
                subset: SubsetIndex::empty(scenario.players()),
                claimed: self.input_epsilon.to_string(),
                actual: actual.to_string(),
            });
        }
        let mut ordered = Vec::new();
        for subset in SubsetIndex::nonempty_strict(scenario.players()) {
            let mut found = self.marginals.iter().filter(|m| m.subset == subset);
            let (Some(m), None) = (found.next(), found.next()) else {
                return Err(Error::argument(format!("need exactly one local conditional for subset {subset}")));
            };
            let outputs = scenario.subset_output_count(&subset);
            if m.conditional.len() != outputs * scenario.subset_input_count(&subset) {
                return Err(Error::shape(format!("local conditional for {subset} has the wrong size")));
            }
            check_conditional(&m.conditional, outputs, &format!("local conditional for {subset}"))?;
            let observed = joint.subset_marginal(&subset);
            let xi = scenario.input_projection(&subset);
            let mut l1 = Rational::zero();
            for x in 0..scenario.input_count() {
                for a in 0..outputs {
                    l1 += (&observed[x * outputs + a] - &target[x] * &m.conditional[xi[x] * outputs + a]).abs();
                }
            }
            let actual = l1 * Rational::new(1, 2);
            if actual > m.epsilon {
                return Err(Error::Certificate { subset, claimed: m.epsilon.to_string(), actual: actual.to_string() });
            }
            ordered.push(m);
        }
        if self.marginals.len() != ordered.len() {
            return Err(Error::argument("local conditionals listed for subsets outside the non-empty strict ones"));
        }
        Ok(ordered)
    }
}

/// A sub-no-signalling `P′` with `½‖T·P′ − P‖₁ ≤ ε_∅ + Σ 2ε_I`.
///
/// Each non-empty strict subset `I` is a block with alphabets `X_I`, `A_I`,
/// in ascending mask order. `P` is lifted along the diagonal embedding
/// `Δ(a̲) = (a_I)_I`, reconstructed block by block, and pulled back by
/// `P′(a̲|x̲) = P̂′(Δ(a̲)|Δ(x̲))`. Only rows `Δ(x̲)` are ever needed. With two
/// players `Δ` is the identity and `P′` is no-signalling.
pub fn reconstruct_snos(
    target: &[Rational],
    joint: &JointDistribution,
    certificate: &SnosCertificate,
) -> Result<Reconstruction> {
    let scenario = joint.scenario();
    if scenario.players() < 2 {
        return Err(Error::Unsupported("SNOS reconstruction needs at least two players".into()));
    }
    let locals = certificate.verify(joint, target)?;
    let subsets: Vec<SubsetIndex> = locals.iter().map(|m| m.subset).collect();
    let block_sizes: Vec<usize> = subsets.iter().map(|s| scenario.subset_output_count(s)).collect();
    let radix = Radix::new(block_sizes.clone());
    let out_proj: Vec<Vec<usize>> = subsets.iter().map(|s| scenario.output_projection(s)).collect();
    let in_proj: Vec<Vec<usize>> = subsets.iter().map(|s| scenario.input_projection(s)).collect();
    let na = scenario.output_count();
    let mut digits = vec![0; subsets.len()];
    let diagonal: Vec<usize> = (0..na)
        .map(|a| {
            for (j, p) in out_proj.iter().enumerate() {
                digits[j] = p[a];
            }
            radix.encode(&digits)
        })
        .collect();
    let mut densities = Vec::with_capacity(scenario.table_len());
    for x in 0..scenario.input_count() {
        let mut row = vec![Rational::zero(); radix.len()];
        for (a, &b) in diagonal.iter().enumerate() {
            row[b] = joint.entries()[x * na + a].clone();
        }
        let targets: Vec<&[Rational]> = locals
            .iter()
            .enumerate()
            .map(|(j, m)| &m.conditional[in_proj[j][x] * block_sizes[j]..][..block_sizes[j]])
            .collect();
        let lifted = reconstruct_row(row, &radix, &targets);
        densities.extend(diagonal.iter().map(|&b| lifted[b].clone()));
    }
    let strategy = Correlation::new(scenario.clone(), densities)?;
    let report = if scenario.players() == 2 { is_ns(&strategy, NsMode::AllSubsets) } else { is_snos(&strategy) };
    if !report.member {
        return Err(Error::Internal(format!("reconstruction left the target set: {:?}", report.violation)));
    }
    let distance = half_l1_to_joint(target, &strategy, joint)?;
    Ok(Reconstruction { strategy, distance, bound: certificate.bound() })
}
