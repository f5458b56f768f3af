use crate::error::{Error, Result};
use crate::game::{Correlation, Scenario, SubsetIndex};
use crate::rational::Rational;

/// A probability distribution on `A̲ × X̲`, stored in the same layout as a
/// [`Correlation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    scenario: Scenario,
    entries: Vec<Rational>,
}

impl JointDistribution {
    /// Requires nonnegative entries summing to exactly 1.
    pub fn new(scenario: Scenario, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != scenario.table_len() {
            return Err(Error::shape(format!(
                "joint table has {} entries, expected {}",
                entries.len(),
                scenario.table_len()
            )));
        }
        check_distribution(&entries, "joint distribution")?;
        Ok(JointDistribution { scenario, entries })
    }

    /// `T(x̲)P(a̲|x̲)`; `P` must be normalized on the support of `T`.
    pub fn from_strategy(distribution: &[Rational], strategy: &Correlation) -> Result<Self> {
        check_distribution(distribution, "query distribution")?;
        let entries = strategy.joint_with(distribution)?;
        JointDistribution::new(strategy.scenario().clone(), entries)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// `Q_X̲`.
    pub fn input_marginal(&self) -> Vec<Rational> {
        let na = self.scenario.output_count();
        self.entries.chunks(na).map(|row| row.iter().sum()).collect()
    }

    /// `Q_{A_I X̲}`, indexed by `x̲·|A_I| + a_I`.
    pub fn subset_marginal(&self, subset: &SubsetIndex) -> Vec<Rational> {
        let proj = self.scenario.output_projection(subset);
        let sub = self.scenario.subset_output_count(subset);
        let na = self.scenario.output_count();
        let mut out = vec![Rational::zero(); sub * self.scenario.input_count()];
        for (e, q) in self.entries.iter().enumerate() {
            if !q.is_zero() {
                out[(e / na) * sub + proj[e % na]] += q;
            }
        }
        out
    }

    /// Conditional `Q(a̲|x̲)`; rows with `Q_X̲(x̲) = 0` are left at zero.
    pub fn conditional(&self) -> Correlation {
        let na = self.scenario.output_count();
        let mut densities = Vec::with_capacity(self.entries.len());
        for row in self.entries.chunks(na) {
            let mass: Rational = row.iter().sum();
            if mass.is_zero() {
                densities.extend(std::iter::repeat_n(Rational::zero(), na));
            } else {
                densities.extend(row.iter().map(|q| q / &mass));
            }
        }
        Correlation::new(self.scenario.clone(), densities).expect("conditional of a valid joint")
    }
}

/// Nonnegative entries summing to exactly one.
pub fn check_distribution(values: &[Rational], what: &str) -> Result<()> {
    if let Some(i) = values.iter().position(Rational::is_negative) {
        return Err(Error::argument(format!("{what} has a negative entry at {i}")));
    }
    let total: Rational = values.iter().sum();
    if !total.is_one() {
        return Err(Error::argument(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}
