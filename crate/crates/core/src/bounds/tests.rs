use super::*;
use crate::catalog::{anticorrelation_game, chsh_game};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

#[test]
fn c_ell_values() {
    assert_eq!(c_ell(1).unwrap(), 1);
    assert_eq!(c_ell(2).unwrap(), 5);
    assert_eq!(c_ell(3).unwrap(), 13);
    assert!(c_ell(0).is_err());
}

#[test]
fn general_repetition_examples() {
    assert!(close(bound_thm1_repetition(1.0 / 3.0, 2, 1).unwrap(), 1.0 - (1.0 / 9.0) / 125.0));
    assert!(close(bound_thm1_repetition(1.0 / 3.0, 3, 10).unwrap(), (1.0 - 1.0 / 7605.0f64).powi(10)));
    assert_eq!(bound_thm1_repetition(0.0, 2, 50).unwrap(), 1.0);
    assert!(bound_thm1_repetition(1.5, 2, 1).is_err());
    assert!(bound_thm1_repetition(-0.1, 2, 1).is_err());
}

#[test]
fn general_concentration_examples() {
    assert!(close(bound_thm1_concentration(0.5, 2, 100).unwrap(), (-0.2f64).exp()));
    assert_eq!(bound_thm1_concentration(0.0, 3, 100).unwrap(), 1.0);
}

#[test]
fn full_support_examples() {
    let b = bound_cor1(BoundKind::Repetition, 0.5, 1.0, 2, 1).unwrap();
    assert!(close(b, 1.0 - 0.25 / 500.0));
    for kind in [BoundKind::Repetition, BoundKind::Concentration] {
        let reduced = bound_cor1(kind, 0.4, 0.0, 3, 7).unwrap();
        let general = match kind {
            BoundKind::Repetition => bound_thm1_repetition(0.4, 3, 7).unwrap(),
            BoundKind::Concentration => bound_thm1_concentration(0.4, 3, 7).unwrap(),
        };
        assert!(close(reduced, general));
    }
    assert!(bound_cor1(BoundKind::Repetition, 0.5, -1.0, 2, 1).is_err());
}

#[test]
fn two_player_examples() {
    assert!(close(bound_thm3(BoundKind::Repetition, 1.0, 1).unwrap(), 26.0 / 27.0));
    assert!(close(bound_thm3(BoundKind::Concentration, 1.0, 33).unwrap(), (-1.0f64).exp()));
}

#[test]
fn two_player_bound_improves_general_one() {
    for i in 1..=20 {
        let delta = i as f64 / 20.0;
        for n in [1, 2, 5, 10, 100, 1000] {
            assert!(bound_thm3(BoundKind::Repetition, delta, n).unwrap() <= bound_thm1_repetition(delta, 2, n).unwrap());
            assert!(
                bound_thm3(BoundKind::Concentration, delta, n).unwrap()
                    <= bound_thm1_concentration(delta, 2, n).unwrap()
            );
        }
    }
}

#[test]
fn monotonicity() {
    let grid: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();
    for &d in &grid {
        for n in 1..20u64 {
            for l in 1..5 {
                let b = bound_thm1_repetition(d, l, n).unwrap();
                assert!(bound_thm1_repetition(d, l, n + 1).unwrap() <= b);
                assert!(bound_thm1_repetition(d + 0.01, l, n).unwrap() <= b);
                assert!(bound_thm1_repetition(d, l + 1, n).unwrap() >= b);
                let c = bound_thm1_concentration(d, l, n).unwrap();
                assert!(bound_thm1_concentration(d, l, n + 1).unwrap() <= c);
                assert!(bound_thm1_concentration(d + 0.01, l, n).unwrap() <= c);
                assert!(bound_thm1_concentration(d, l + 1, n).unwrap() >= c);
                for kind in [BoundKind::Repetition, BoundKind::Concentration] {
                    let g = bound_cor1(kind, d, 0.5, l, n).unwrap();
                    assert!(bound_cor1(kind, d, 1.5, l, n).unwrap() >= g);
                    assert!(bound_cor1(kind, d, 0.5, l, n + 1).unwrap() <= g);
                }
            }
            for kind in [BoundKind::Repetition, BoundKind::Concentration] {
                let b = bound_thm3(kind, d, n).unwrap();
                assert!(bound_thm3(kind, d, n + 1).unwrap() <= b);
                assert!(bound_thm3(kind, d + 0.01, n).unwrap() <= b);
            }
        }
    }
}

#[test]
fn epsilon_choices_meet_their_targets() {
    for i in 1..100 {
        let p = i as f64 / 100.0;
        for l in 2..6 {
            let c = c_ell(l).unwrap() as f64;
            let e = balanced_epsilon(BoundKind::Repetition, p, l).unwrap();
            assert!(e * e >= p * p / (5.0 * c * c));
            let e = balanced_epsilon(BoundKind::Concentration, p, l).unwrap();
            assert!(e * e >= p * p / (5.0 * c * c));
        }
        let e = two_player_epsilon(BoundKind::Repetition, p).unwrap();
        assert!(e * e >= p * p / 27.0);
        let e = two_player_epsilon(BoundKind::Concentration, p).unwrap();
        assert!(e * e >= p * p / 33.0);
    }
}

#[test]
fn split_edge_cases() {
    let (first, _) = split_bound(BoundKind::Repetition, 0.3, 2, 4, 0.0).unwrap();
    assert!(close(first, 0.7f64.powi(4)));
    let (first, _) = split_bound(BoundKind::Concentration, 0.3, 2, 4, 0.3 / 10.0).unwrap();
    assert!(close(first, 1.0));
    assert!(split_bound(BoundKind::Concentration, 0.3, 2, 4, 0.5).is_err());
    assert!(split_bound(BoundKind::Repetition, 0.3, 2, 4, 1.0).is_err());
}

/// At the balancing choices each split term is at most the final bound.
#[test]
fn split_terms_at_balanced_epsilon_are_dominated() {
    for i in 1..20 {
        let p = i as f64 / 20.0;
        for n in [1u64, 3, 10, 100, 1000, 10000] {
            for l in 2..5 {
                let e = balanced_epsilon(BoundKind::Repetition, p, l).unwrap();
                let (a, b) = split_bound(BoundKind::Repetition, p, l, n, e).unwrap();
                let fin = bound_thm1_repetition(p, l, n).unwrap();
                assert!(a <= fin + 1e-12 && b <= fin + 1e-12, "rep p={p} n={n} l={l}");
                let e = balanced_epsilon(BoundKind::Concentration, p, l).unwrap();
                let (a, b) = split_bound(BoundKind::Concentration, p, l, n, e).unwrap();
                let fin = bound_thm1_concentration(p, l, n).unwrap();
                assert!(a <= fin + 1e-12 && b <= fin + 1e-12, "conc p={p} n={n} l={l}");
            }
            let e = two_player_epsilon(BoundKind::Repetition, p).unwrap();
            let (a, b) = split_bound_two_player(BoundKind::Repetition, p, n, e).unwrap();
            let fin = bound_thm3(BoundKind::Repetition, p, n).unwrap();
            assert!(a <= fin + 1e-12 && b <= fin + 1e-12);
            let e = two_player_epsilon(BoundKind::Concentration, p).unwrap();
            let (a, b) = split_bound_two_player(BoundKind::Concentration, p, n, e).unwrap();
            let fin = bound_thm3(BoundKind::Concentration, p, n).unwrap();
            assert!(a <= fin + 1e-12 && b <= fin + 1e-12);
        }
    }
}

/// The sum of the split terms does not dominate the final bound in general:
/// the balancing slack gives a strictly better rate than the stated one.
#[test]
fn split_sum_can_fall_below_final_bound() {
    let e = balanced_epsilon(BoundKind::Repetition, 0.9, 2).unwrap();
    let (a, b) = split_bound(BoundKind::Repetition, 0.9, 2, 1000, e).unwrap();
    let fin = bound_thm1_repetition(0.9, 2, 1000).unwrap();
    assert!(a + b < fin - 1e-9);
}

#[test]
fn prefactors() {
    let cond = Prefactor::Conditional { outputs: 2, inputs: 2 };
    assert_eq!(definetti_prefactor(&cond, 0).unwrap(), 1.0);
    assert_eq!(definetti_prefactor(&cond, 1).unwrap(), 16.0);
    let snos = Prefactor::Snos { outputs: 2, inputs: 2 };
    assert_eq!(snos.exponent().unwrap(), 56);
    assert_eq!(definetti_prefactor(&snos, 1).unwrap(), 2f64.powi(56));
    assert_eq!(Prefactor::Constrained { alphabet: 3 }.exponent().unwrap(), 27);
    assert!(definetti_prefactor(&Prefactor::Constrained { alphabet: 0 }, 1).is_err());
}

#[test]
fn parse_and_evaluate() {
    let params: BoundParams = "l=3,delta=0.5,n=4".parse().unwrap();
    let b = evaluate(BoundName::Thm1Rep, &params).unwrap();
    assert!(close(b, (1.0 - 0.25 / 845.0f64).powi(4)));
    let params: BoundParams = "kind=snos,outputs=2,inputs=2,n=1".parse().unwrap();
    assert_eq!(evaluate(BoundName::Prefactor, &params).unwrap(), 2f64.powi(56));
    let params: BoundParams = "alpha=1,n=33".parse().unwrap();
    assert!(close(evaluate(BoundName::Thm3, &params).unwrap(), (-1.0f64).exp()));
    let params: BoundParams = "delta=0.3,alpha=0.5,n=3".parse().unwrap();
    assert!(evaluate(BoundName::Thm3, &params).is_err());
    let params: BoundParams = "l=2,delta=0.5,alpha=0.2,n=10,t=5".parse().unwrap();
    assert!(evaluate(BoundName::Thm1Conc, &params).is_err());
    let params: BoundParams = "l=2,delta=0.5,alpha=0.2,n=10,t=7".parse().unwrap();
    assert!(evaluate(BoundName::Thm1Conc, &params).is_ok());
    assert!("l=2,bogus=1".parse::<BoundParams>().is_err());
    assert!("l=2,l=3".parse::<BoundParams>().is_err());
    assert!("l".parse::<BoundParams>().is_err());
    assert!(evaluate(BoundName::Thm1Rep, &"l=2".parse().unwrap()).is_err());
    assert_eq!("cor1".parse::<BoundName>().unwrap().to_string(), "cor1");
}

#[test]
fn report_pass_rule() {
    let r = BoundReport::new(BoundName::Thm3, BoundParams::default(), 0.5, Some(Rational::new(1, 2)));
    assert!(r.pass);
    let r = BoundReport::new(BoundName::Thm3, BoundParams::default(), 0.5, Some(Rational::new(500_001, 1_000_000)));
    assert!(!r.pass);
    assert!(BoundReport::new(BoundName::Thm3, BoundParams::default(), 0.0, None).pass);
}

#[test]
fn sandwich_on_catalog_games() {
    let a3 = anticorrelation_game();
    let r = verify_sandwich(&a3, 1, Model::Snos, None).unwrap();
    assert!(r.pass && r.lower_holds && r.upper_holds);
    let r = verify_sandwich(&a3, 2, Model::Snos, None).unwrap();
    assert_eq!(r.repeated, Rational::one());
    assert_eq!(r.power, r.repeated);
    assert_eq!(r.single, r.repeated);
    assert!(r.pass);
    let r = verify_sandwich(&chsh_game(), 2, Model::Ns, Some(1.0)).unwrap();
    assert_eq!((r.power.clone(), r.repeated.clone(), r.single.clone()), (Rational::one(), Rational::one(), Rational::one()));
    assert_eq!(r.bounds.len(), 2);
    assert!(r.pass);
    let r = verify_sandwich(&chsh_game(), 2, Model::Classical, None).unwrap();
    assert!(r.pass && r.bounds.is_empty());
}
