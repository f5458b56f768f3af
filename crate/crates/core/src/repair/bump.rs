use crate::error::{Error, Result};
use crate::game::{Correlation, SubsetIndex};
use crate::polytope::{is_ns, is_snos, minimal_dominating_marginal, NsMode};
use crate::rational::Rational;

/// Lifts a two-player SNOS correlation to an NS correlation dominating it
/// pointwise.
///
/// The local distributions are the padded minimal dominators `Q(a|x)`,
/// `Q(b|y)`. Entries are visited in lexicographic order of `(x, y, a, b)` and
/// each is raised by the largest amount keeping `P(a|xy) ≤ Q(a|x)` and
/// `P(b|xy) ≤ Q(b|y)`. Every step saturates one of the two, and one sweep
/// saturates all of them, leaving `P(a|xy) = Q(a|x)` and `P(b|xy) = Q(b|y)`.
pub fn bump_up(strategy: &Correlation) -> Result<Correlation> {
    let scenario = strategy.scenario();
    if scenario.players() != 2 {
        return Err(Error::Unsupported(format!(
            "bump-up is only guaranteed for two players, got {}",
            scenario.players()
        )));
    }
    let report = is_snos(strategy);
    if !report.member {
        return Err(Error::argument(format!("input is not sub-no-signalling: {:?}", report.violation)));
    }
    let qa = minimal_dominating_marginal(strategy, &SubsetIndex::new(2, &[0])?)?.padded();
    let qb = minimal_dominating_marginal(strategy, &SubsetIndex::new(2, &[1])?)?.padded();
    let (nx, ny) = (scenario.inputs()[0], scenario.inputs()[1]);
    let (na, nb) = (scenario.outputs()[0], scenario.outputs()[1]);
    let mut densities = strategy.densities().to_vec();
    for x in 0..nx {
        for y in 0..ny {
            let row = &mut densities[(x * ny + y) * na * nb..][..na * nb];
            let mut room_a: Vec<_> = (0..na)
                .map(|a| qa.get(a, x) - (0..nb).map(|b| &row[a * nb + b]).sum::<Rational>())
                .collect();
            let mut room_b: Vec<_> = (0..nb)
                .map(|b| qb.get(b, y) - (0..na).map(|a| &row[a * nb + b]).sum::<Rational>())
                .collect();
            for a in 0..na {
                for b in 0..nb {
                    let step = room_a[a].clone().min(room_b[b].clone());
                    if step.is_positive() {
                        row[a * nb + b] += &step;
                        room_a[a] -= &step;
                        room_b[b] -= &step;
                    }
                }
            }
        }
    }
    let lifted = Correlation::new(scenario.clone(), densities)?;
    let check = is_ns(&lifted, NsMode::AllSubsets);
    if !check.member {
        return Err(Error::Internal(format!("bump-up left a constraint slack: {:?}", check.violation)));
    }
    Ok(lifted)
}
