use super::*;
use crate::game::{Correlation, JointDistribution, Scenario, SubsetIndex};
use crate::rational::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// `P(ab|xy) = δ_{a,y} δ_{b,x}`: each player outputs the other's input.
fn swap_inputs() -> Correlation {
    Correlation::from_fn(Scenario::binary(2), |a, x| Rational::from((a[0] == x[1] && a[1] == x[0]) as i64)).unwrap()
}

fn pr_box() -> Correlation {
    Correlation::from_fn(Scenario::binary(2), |a, x| {
        if (a[0] ^ a[1]) == (x[0] & x[1]) {
            r(1, 2)
        } else {
            Rational::zero()
        }
    })
    .unwrap()
}

#[test]
fn zero_density_is_snos_but_not_ns() {
    let zero = Correlation::zero(Scenario::binary(3));
    let rep = is_snos(&zero);
    assert!(rep.member);
    assert_eq!(rep.witnesses.len(), 7);
    // padding puts all the mass on the first output
    for w in &rep.witnesses {
        for row in w.table.chunks(w.outputs) {
            assert!(row[0].is_one());
        }
    }
    assert!(!is_ns(&zero, NsMode::SinglesComplement).member);
}

#[test]
fn swap_inputs_violates_snos_at_single_player() {
    let p = swap_inputs();
    let m = minimal_dominating_marginal(&p, &SubsetIndex::new(2, &[0]).unwrap()).unwrap();
    assert_eq!(m.table, vec![r(1, 1); 4]);
    let rep = is_snos(&p);
    assert!(!rep.member);
    match rep.violation.unwrap() {
        Violation::DominatorExcess { subset, mass, .. } => {
            assert_eq!(subset.members(), vec![0]);
            assert_eq!(mass, r(2, 1));
        }
        other => panic!("{other:?}"),
    }
    assert!(!snos_feasible_by_lp(&p).unwrap());
}

#[test]
fn pr_box_and_uniform_are_ns() {
    for p in [pr_box(), Correlation::uniform(Scenario::new(vec![2, 3, 2], vec![3, 2, 2]).unwrap())] {
        for mode in [NsMode::SinglesComplement, NsMode::AllSubsets] {
            let rep = is_ns(&p, mode);
            assert!(rep.member, "{:?}", rep.violation);
            assert!(rep.violation.is_none());
        }
        assert!(is_snos(&p).member);
        assert!(snos_feasible_by_lp(&p).unwrap());
    }
}

#[test]
fn signalling_is_located() {
    let rep = is_ns(&swap_inputs(), NsMode::AllSubsets);
    assert!(matches!(rep.violation, Some(Violation::Signalling { .. })));
    assert!(rep.witnesses.is_empty());
}

#[test]
fn negative_entries_reported_not_raised() {
    let mut d = Correlation::uniform(Scenario::binary(2)).into_densities();
    d[5] = r(-1, 4);
    let p = Correlation::from_signed(Scenario::binary(2), d).unwrap();
    assert!(matches!(is_snos(&p).violation, Some(Violation::NegativeDensity { inputs: 1, outputs: 1, .. })));
    assert!(!is_ns(&p, NsMode::AllSubsets).member);
    assert!(!snos_feasible_by_lp(&p).unwrap());
}

#[test]
fn overfull_input_is_normalization_violation() {
    let mut d = Correlation::zero(Scenario::binary(2)).into_densities();
    d[4] = r(3, 4);
    d[5] = r(1, 2);
    let p = Correlation::new(Scenario::binary(2), d).unwrap();
    assert!(matches!(is_snos(&p).violation, Some(Violation::Normalization { inputs: 1, .. })));
}

#[test]
fn fidelity_and_trace_distance_basics() {
    let p = [r(1, 2), r(1, 2)];
    let q = [r(1, 1), r(0, 1)];
    assert!((fidelity(&p, &p).unwrap() - 1.0).abs() < 1e-12);
    assert!((fidelity(&p, &q).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(fidelity(&q, &[r(0, 1), r(1, 1)]).unwrap(), 0.0);
    assert_eq!(trace_distance(&p, &p).unwrap(), Rational::zero());
    assert_eq!(trace_distance(&q, &[r(0, 1), r(1, 1)]).unwrap(), r(1, 1));
    assert_eq!(trace_distance(&p, &q).unwrap(), r(1, 2));
    assert!(fidelity(&p, &q[..1]).is_err());
}

#[test]
fn consistent_joint_has_zero_distance_and_unit_tilde_fidelity() {
    let t = vec![r(1, 8), r(3, 8), r(1, 4), r(1, 4)];
    let joint = JointDistribution::from_strategy(&t, &pr_box()).unwrap();
    for subset in SubsetIndex::nonempty_strict(2) {
        let d = marginal_consistency_distance(&joint, &t, &subset).unwrap();
        assert!(d.distance.is_zero());
        assert_eq!(d.conditional, vec![r(1, 2); 4]);
    }
    assert!(p_epsilon_membership(&joint, &t, &Rational::zero()).unwrap());
    assert!((tilde_fidelity(&joint, &t).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn mismatched_input_marginal_bounds_distance() {
    // Q puts all input mass on x = (0,0); T is uniform.
    let s = Scenario::binary(2);
    let mut entries = vec![Rational::zero(); 16];
    entries[0] = r(1, 2);
    entries[3] = r(1, 2);
    let joint = JointDistribution::new(s, entries).unwrap();
    let t = vec![r(1, 4); 4];
    let floor = trace_distance(&joint.input_marginal(), &t).unwrap();
    for subset in SubsetIndex::nonempty_strict(2) {
        assert!(marginal_consistency_distance(&joint, &t, &subset).unwrap().distance >= floor);
    }
    assert!(p_epsilon_membership(&joint, &t, &Rational::one()).unwrap());
}

#[test]
fn disjoint_support_has_zero_tilde_fidelity() {
    let s = Scenario::binary(2);
    let mut entries = vec![Rational::zero(); 16];
    entries[0] = r(1, 1);
    let joint = JointDistribution::new(s, entries).unwrap();
    let t = vec![r(0, 1), r(1, 3), r(1, 3), r(1, 3)];
    assert_eq!(tilde_fidelity(&joint, &t).unwrap(), 0.0);
}

#[test]
fn unnormalized_distribution_is_rejected() {
    let joint = JointDistribution::from_strategy(&vec![r(1, 4); 4], &pr_box()).unwrap();
    let bad = vec![r(1, 4); 3].into_iter().chain([r(1, 2)]).collect::<Vec<_>>();
    assert!(tilde_fidelity(&joint, &bad).is_err());
    assert!(marginal_consistency_distance(&joint, &bad, &SubsetIndex::new(2, &[0]).unwrap()).is_err());
    assert!(JointDistribution::new(Scenario::binary(2), vec![r(1, 8); 16]).is_err());
}
