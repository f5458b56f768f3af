use crate::error::{Error, Result};
use crate::lp::{LpProblem, LpSolution, LpStatus, Relation, Sense};
use crate::rational::Rational;

/// Column layout: structural columns (free variables split in two), then one
/// slack or surplus per inequality, then one artificial per `≥`/`=` row.
/// Bland's rule picks the lowest eligible column index, so this order is part
/// of the determinism contract.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs for the current phase (maximization form).
    objective: Vec<Rational>,
    value: Rational,
    /// Columns allowed to enter the basis.
    eligible: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut().filter(|v| !v.is_zero()) {
                *v *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
            if !pivot_rhs.is_zero() {
                self.rhs[i] -= &f * &pivot_rhs;
            }
        }
        let f = self.objective[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.objective[j] -= &f * &pivot_row[j];
            }
            self.value -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Primal simplex with Bland's rule on the current objective row.
    fn optimize(&mut self) -> Outcome {
        loop {
            let Some(c) = (0..self.eligible).find(|&j| self.objective[j].is_negative()) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }

    /// Installs `costs` (maximization, per column) as the objective and prices
    /// out the current basis.
    fn set_objective(&mut self, costs: Vec<Rational>) {
        self.objective = costs.into_iter().map(|c| -c).collect();
        self.value = Rational::zero();
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            let f = self.objective[b].clone();
            if f.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    self.objective[j] -= &f * v;
                }
            }
            self.value -= &f * &self.rhs[i];
        }
    }

    fn remove_row(&mut self, i: usize) {
        self.rows.remove(i);
        self.rhs.remove(i);
        self.basis.remove(i);
    }
}

/// Solves `problem` exactly. Infeasible and unbounded problems are reported
/// through [`LpStatus`]; malformed problems are errors.
pub fn lp_solve(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    let n = problem.variables();

    // Structural columns.
    let mut column_of = Vec::with_capacity(n);
    let mut structural = 0;
    for &nn in &problem.nonnegative {
        column_of.push(structural);
        structural += if nn { 1 } else { 2 };
    }

    // Normalize to nonnegative right-hand sides.
    let mut normalized: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(problem.constraints.len());
    for con in &problem.constraints {
        let mut row = vec![Rational::zero(); structural];
        for (j, c) in con.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            row[column_of[j]] = c.clone();
            if !problem.nonnegative[j] {
                row[column_of[j] + 1] = -c;
            }
        }
        let (row, rel, rhs) = if con.rhs.is_negative() {
            let flipped = match con.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (row.into_iter().map(|v| -v).collect(), flipped, -&con.rhs)
        } else {
            (row, con.relation, con.rhs.clone())
        };
        normalized.push((row, rel, rhs));
    }

    let slacks = normalized.iter().filter(|(_, rel, _)| *rel != Relation::Eq).count();
    let artificials = normalized.iter().filter(|(_, rel, _)| *rel != Relation::Le).count();
    let width = structural + slacks + artificials;
    let first_artificial = structural + slacks;

    let m = normalized.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (structural, first_artificial);
    for (mut row, rel, b) in normalized {
        row.resize(width, Rational::zero());
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
        rhs.push(b);
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        objective: Vec::new(),
        value: Rational::zero(),
        eligible: width,
    };

    // Phase 1: maximize -(sum of artificials).
    if artificials > 0 {
        let mut costs = vec![Rational::zero(); width];
        for c in &mut costs[first_artificial..] {
            *c = -Rational::one();
        }
        t.set_objective(costs);
        t.eligible = width;
        if let Outcome::Unbounded = t.optimize() {
            return Err(Error::Internal("phase one reported unbounded".into()));
        }
        if t.value.is_negative() {
            return Ok(LpSolution { status: LpStatus::Infeasible, value: None, witness: None });
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] < first_artificial {
                i += 1;
                continue;
            }
            match (0..first_artificial).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => t.remove_row(i),
            }
        }
        for row in &mut t.rows {
            row.truncate(first_artificial);
        }
    }

    // Phase 2.
    let sign = match problem.sense {
        Sense::Maximize => Rational::one(),
        Sense::Minimize => -Rational::one(),
    };
    let mut costs = vec![Rational::zero(); first_artificial];
    for (j, c) in problem.objective.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = c * &sign;
        if !problem.nonnegative[j] {
            costs[column_of[j] + 1] = -&c;
        }
        costs[column_of[j]] = c;
    }
    t.set_objective(costs);
    t.eligible = first_artificial;
    if let Outcome::Unbounded = t.optimize() {
        return Ok(LpSolution { status: LpStatus::Unbounded, value: None, witness: None });
    }

    let mut columns = vec![Rational::zero(); first_artificial];
    for (i, &b) in t.basis.iter().enumerate() {
        columns[b] = t.rhs[i].clone();
    }
    let witness: Vec<Rational> = (0..n)
        .map(|j| {
            let c = column_of[j];
            if problem.nonnegative[j] {
                columns[c].clone()
            } else {
                &columns[c] - &columns[c + 1]
            }
        })
        .collect();
    let value = problem.objective_value(&witness);
    if value != &t.value * &sign {
        return Err(Error::Internal(format!("tableau value {} disagrees with witness value {value}", t.value)));
    }
    if !problem.is_feasible(&witness) {
        return Err(Error::Internal("optimal witness violates a constraint".into()));
    }
    Ok(LpSolution { status: LpStatus::Optimal, value: Some(value), witness: Some(witness) })
}
