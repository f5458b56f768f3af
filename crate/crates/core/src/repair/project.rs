use crate::error::{Error, Result};
use crate::game::{check_distribution, Correlation};
use crate::lp::{lp_solve, LpProblem, Relation, Sense};
use crate::polytope::{is_ns, NsMode};
use crate::rational::Rational;

/// The NS correlation `P″` minimizing `½‖T·P″ − T·P′‖₁`, and that minimum.
///
/// NS is imposed by normalization and, for each `I = [ℓ]∖{i}`, equality of
/// `P″(a_I|x̲)` with its value at `x_i = 0`.
pub fn nearest_ns(target: &[Rational], strategy: &Correlation) -> Result<(Correlation, Rational)> {
    let scenario = strategy.scenario();
    if target.len() != scenario.input_count() {
        return Err(Error::shape("query distribution does not match the correlation"));
    }
    check_distribution(target, "query distribution")?;
    for x in 0..scenario.input_count() {
        let mass = strategy.total_mass(x);
        if !mass.is_one() {
            return Err(Error::argument(format!("correlation has mass {mass} at input {x}, expected 1")));
        }
    }
    let (nx, na, len) = (scenario.input_count(), scenario.output_count(), scenario.table_len());
    // Columns: P″ entries, then one deviation per entry with T(x̲) > 0.
    let mut deviation = vec![None; len];
    let mut columns = len;
    for e in 0..len {
        if target[e / na].is_positive() {
            deviation[e] = Some(columns);
            columns += 1;
        }
    }
    let half = Rational::new(1, 2);
    let mut objective = vec![Rational::zero(); columns];
    for e in 0..len {
        if let Some(u) = deviation[e] {
            objective[u] = &half * &target[e / na];
        }
    }
    let mut lp = LpProblem::new(Sense::Minimize, objective);
    let one = Rational::one();
    for x in 0..nx {
        let terms: Vec<_> = (0..na).map(|a| (scenario.entry(a, x), one.clone())).collect();
        lp.add_sparse(&terms, Relation::Eq, one.clone());
    }
    let ir = scenario.input_radix();
    let players = scenario.players();
    for i in (0..players).filter(|_| players > 1) {
        let keep: Vec<usize> = (0..players).filter(|&p| p != i).collect();
        let proj = scenario.output_radix().projection(&keep);
        let groups = scenario.output_count() / scenario.outputs()[i];
        for x in 0..nx {
            let mut xs = ir.decode(x);
            if xs[i] == 0 {
                continue;
            }
            xs[i] = 0;
            let reference = ir.encode(&xs);
            for g in 0..groups {
                let mut terms = Vec::new();
                for a in (0..na).filter(|&a| proj[a] == g) {
                    terms.push((scenario.entry(a, x), one.clone()));
                    terms.push((scenario.entry(a, reference), -&one));
                }
                lp.add_sparse(&terms, Relation::Eq, Rational::zero());
            }
        }
    }
    for (e, p) in strategy.densities().iter().enumerate() {
        if let Some(u) = deviation[e] {
            lp.add_sparse(&[(u, one.clone()), (e, -&one)], Relation::Ge, -p);
            lp.add_sparse(&[(u, one.clone()), (e, one.clone())], Relation::Ge, p.clone());
        }
    }
    let (distance, witness) = lp_solve(&lp)?.into_optimum()?;
    let projected = Correlation::new(scenario.clone(), witness[..len].to_vec())?;
    let report = is_ns(&projected, NsMode::AllSubsets);
    if !report.member {
        return Err(Error::Internal(format!("projection is not no-signalling: {:?}", report.violation)));
    }
    Ok((projected, distance))
}
