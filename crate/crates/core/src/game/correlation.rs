use crate::error::{Error, Result};
use crate::game::{Scenario, SubsetIndex};
use crate::rational::Rational;

/// A dense table of conditional (sub-)densities `P(a̲|x̲)`, laid out like the
/// predicate of a [`Game`](crate::game::Game).
///
/// No normalization is imposed here; whether a table is no-signalling or
/// sub-no-signalling is decided by [`crate::polytope`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Correlation {
    scenario: Scenario,
    densities: Vec<Rational>,
}

impl Correlation {
    /// Rejects negative entries.
    pub fn new(scenario: Scenario, densities: Vec<Rational>) -> Result<Self> {
        let c = Self::from_signed(scenario, densities)?;
        if let Some(e) = c.densities.iter().position(Rational::is_negative) {
            return Err(Error::argument(format!("negative density at entry {e}")));
        }
        Ok(c)
    }

    /// Shape-checked but sign-unchecked; used for tables read from outside
    /// that membership tests should diagnose rather than refuse.
    pub fn from_signed(scenario: Scenario, densities: Vec<Rational>) -> Result<Self> {
        if densities.len() != scenario.table_len() {
            return Err(Error::shape(format!(
                "correlation has {} entries, expected {}",
                densities.len(),
                scenario.table_len()
            )));
        }
        Ok(Correlation { scenario, densities })
    }

    pub fn zero(scenario: Scenario) -> Self {
        let densities = vec![Rational::zero(); scenario.table_len()];
        Correlation { scenario, densities }
    }

    /// `P(a̲|x̲) = 1/|A̲|`.
    pub fn uniform(scenario: Scenario) -> Self {
        let p = Rational::new(1, scenario.output_count() as i64);
        let densities = vec![p; scenario.table_len()];
        Correlation { scenario, densities }
    }

    /// Deterministic strategy: player `i` answers `responses[i][x_i]`.
    pub fn deterministic(scenario: Scenario, responses: &[Vec<usize>]) -> Result<Self> {
        if responses.len() != scenario.players()
            || responses.iter().zip(scenario.inputs()).any(|(r, &n)| r.len() != n)
            || responses.iter().zip(scenario.outputs()).any(|(r, &m)| r.iter().any(|&a| a >= m))
        {
            return Err(Error::shape("response tables do not match the alphabets"));
        }
        let (ir, or) = (scenario.input_radix(), scenario.output_radix());
        let mut densities = vec![Rational::zero(); scenario.table_len()];
        let mut answer = vec![0; scenario.players()];
        for x in 0..scenario.input_count() {
            for (i, &xi) in ir.decode(x).iter().enumerate() {
                answer[i] = responses[i][xi];
            }
            densities[scenario.entry(or.encode(&answer), x)] = Rational::one();
        }
        Ok(Correlation { scenario, densities })
    }

    pub fn from_fn(scenario: Scenario, mut density: impl FnMut(&[usize], &[usize]) -> Rational) -> Result<Self> {
        let (ir, or) = (scenario.input_radix(), scenario.output_radix());
        let mut densities = Vec::with_capacity(scenario.table_len());
        for x in 0..scenario.input_count() {
            let xs = ir.decode(x);
            for a in 0..scenario.output_count() {
                densities.push(density(&or.decode(a), &xs));
            }
        }
        Correlation::new(scenario, densities)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn densities(&self) -> &[Rational] {
        &self.densities
    }

    pub fn into_densities(self) -> Vec<Rational> {
        self.densities
    }

    pub fn get(&self, outputs: usize, inputs: usize) -> &Rational {
        &self.densities[self.scenario.entry(outputs, inputs)]
    }

    /// Row `P(·|x̲)`.
    pub fn row(&self, inputs: usize) -> &[Rational] {
        let na = self.scenario.output_count();
        &self.densities[inputs * na..(inputs + 1) * na]
    }

    /// `Σ_a̲ P(a̲|x̲)`.
    pub fn total_mass(&self, inputs: usize) -> Rational {
        self.row(inputs).iter().sum()
    }

    /// Pointwise `self ≥ other`.
    pub fn dominates(&self, other: &Correlation) -> bool {
        self.scenario == other.scenario && self.densities.iter().zip(&other.densities).all(|(a, b)| a >= b)
    }

    /// `self ⊗ other` over the per-player round product of alphabets.
    pub fn tensor(&self, other: &Correlation) -> Result<Correlation> {
        let scenario = self.scenario.round_product(&other.scenario)?;
        let xmap = self.scenario.round_product_map(&other.scenario, false);
        let amap = self.scenario.round_product_map(&other.scenario, true);
        let (nx2, na2) = (other.scenario.input_count(), other.scenario.output_count());
        let mut densities = vec![Rational::zero(); scenario.table_len()];
        for (e1, p1) in self.densities.iter().enumerate() {
            if p1.is_zero() {
                continue;
            }
            let (x1, a1) = (e1 / self.scenario.output_count(), e1 % self.scenario.output_count());
            for (e2, p2) in other.densities.iter().enumerate() {
                if p2.is_zero() {
                    continue;
                }
                let (x2, a2) = (e2 / na2, e2 % na2);
                let x = xmap[x1 * nx2 + x2];
                let a = amap[a1 * na2 + a2];
                densities[scenario.entry(a, x)] = p1 * p2;
            }
        }
        Ok(Correlation { scenario, densities })
    }

    /// `P^{⊗n}`, `n ≥ 1`.
    pub fn tensor_power(&self, n: usize) -> Result<Correlation> {
        if n == 0 {
            return Err(Error::argument("tensor power needs n ≥ 1"));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }

    /// Joint distribution `T(x̲)P(a̲|x̲)` on `A̲ × X̲`, same layout.
    pub fn joint_with(&self, distribution: &[Rational]) -> Result<Vec<Rational>> {
        if distribution.len() != self.scenario.input_count() {
            return Err(Error::shape("distribution length does not match the input alphabet"));
        }
        let na = self.scenario.output_count();
        Ok(self.densities.iter().enumerate().map(|(e, p)| p * &distribution[e / na]).collect())
    }

    /// Marginal density `P(a_I|x̲) = Σ_{a_{I^c}} P(a_I a_{I^c}|x̲)`.
    pub fn marginal(&self, subset: &SubsetIndex) -> Result<Marginal> {
        if subset.players() != self.scenario.players() {
            return Err(Error::shape("subset refers to a different player count"));
        }
        let proj = self.scenario.output_projection(subset);
        let sub = self.scenario.subset_output_count(subset);
        let na = self.scenario.output_count();
        let mut entries = vec![Rational::zero(); sub * self.scenario.input_count()];
        for (e, p) in self.densities.iter().enumerate() {
            if !p.is_zero() {
                entries[(e / na) * sub + proj[e % na]] += p;
            }
        }
        Ok(Marginal { scenario: self.scenario.clone(), subset: *subset, entries })
    }
}

/// A marginal table `P(a_I|x̲)`, indexed by `x̲·|A_I| + a_I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginal {
    scenario: Scenario,
    subset: SubsetIndex,
    entries: Vec<Rational>,
}

impl Marginal {
    pub fn subset(&self) -> &SubsetIndex {
        &self.subset
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// `|A_I|`.
    pub fn subset_outputs(&self) -> usize {
        self.entries.len() / self.scenario.input_count()
    }

    pub fn get(&self, subset_outputs: usize, inputs: usize) -> &Rational {
        &self.entries[inputs * self.subset_outputs() + subset_outputs]
    }

    /// Further marginalizes onto `J ⊆ I`.
    pub fn restrict(&self, to: &SubsetIndex) -> Result<Marginal> {
        if !to.is_subset_of(&self.subset) {
            return Err(Error::argument(format!("{to} is not contained in {}", self.subset)));
        }
        let members = self.subset.members();
        let positions: Vec<usize> = to.members().iter().map(|m| members.iter().position(|x| x == m).unwrap()).collect();
        let radix = super::Radix::new(members.iter().map(|&i| self.scenario.outputs()[i]).collect());
        let proj = radix.projection(&positions);
        let (from, sub) = (self.subset_outputs(), self.scenario.subset_output_count(to));
        let mut entries = vec![Rational::zero(); sub * self.scenario.input_count()];
        for (e, p) in self.entries.iter().enumerate() {
            entries[(e / from) * sub + proj[e % from]] += p;
        }
        Ok(Marginal { scenario: self.scenario.clone(), subset: *to, entries })
    }
}

/// Free-function form of [`Correlation::marginal`].
pub fn marginal(strategy: &Correlation, subset: &SubsetIndex) -> Result<Marginal> {
    strategy.marginal(subset)
}
