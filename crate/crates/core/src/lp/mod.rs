//! Exact-rational linear programming.
//!
//! [`lp_solve`] runs a two-phase dense-tableau simplex with Bland's rule, so
//! it terminates on degenerate problems and yields the same answer for the
//! same problem every time. Every optimal witness is re-checked against the
//! original constraints before it is returned.

mod simplex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use simplex::lp_solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coefficients
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum()
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// `optimize objective·x` subject to the constraints, with `x_j ≥ 0` wherever
/// `nonnegative[j]` is set and `x_j` free otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub nonnegative: Vec<bool>,
}

impl LpProblem {
    /// All variables nonnegative, no constraints yet.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LpProblem { sense, objective, constraints: Vec::new(), nonnegative: vec![true; n] }
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, var: usize) {
        self.nonnegative[var] = false;
    }

    pub fn add_constraint(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coefficients, relation, rhs });
    }

    /// Dense row from `(variable, coefficient)` pairs; repeated variables add up.
    pub fn add_sparse(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut row = vec![Rational::zero(); self.variables()];
        for (j, c) in terms {
            row[*j] += c;
        }
        self.add_constraint(row, relation, rhs);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.variables();
        if self.nonnegative.len() != n {
            return Err(Error::argument(format!(
                "{} sign flags for {n} variables",
                self.nonnegative.len()
            )));
        }
        if let Some(k) = self.constraints.iter().position(|c| c.coefficients.len() != n) {
            return Err(Error::argument(format!(
                "constraint {k} has {} coefficients, expected {n}",
                self.constraints[k].coefficients.len()
            )));
        }
        Ok(())
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective.iter().zip(point).filter(|(c, _)| !c.is_zero()).map(|(c, x)| c * x).sum()
    }

    /// Exact feasibility of `point`.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.variables()
            && point.iter().zip(&self.nonnegative).all(|(x, &nn)| !nn || !x.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(point))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value.
    pub value: Option<Rational>,
    /// Optimal point, one entry per variable.
    pub witness: Option<Vec<Rational>>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Value and witness of an optimal solution, or an error naming the status.
    pub fn into_optimum(self) -> Result<(Rational, Vec<Rational>)> {
        match (self.status, self.value, self.witness) {
            (LpStatus::Optimal, Some(v), Some(w)) => Ok((v, w)),
            (status, ..) => Err(Error::Internal(format!("expected an optimal LP, got {status:?}"))),
        }
    }
}
