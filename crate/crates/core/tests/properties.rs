use proptest::prelude::*;

use nonlocal_games::bounds::{bound_thm1_concentration, bound_thm1_repetition, bound_thm3, split_bound, BoundKind};
use nonlocal_games::catalog::{random_binary_game, random_correlation, random_ns_correlation, random_snos_correlation};
use nonlocal_games::format::Document;
use nonlocal_games::game::{repeat_game, Correlation, Scenario};
use nonlocal_games::polytope::{fidelity, is_ns, is_snos, snos_feasible_by_lp, trace_distance, NsMode};
use nonlocal_games::repair::{bump_up, maximal_coupling, nearest_ns};
use nonlocal_games::values::{value_classical, value_ns, value_snos};
use nonlocal_games::Rational;

fn distribution(size: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(0i64..=12, size).prop_filter_map("nonzero", |w| {
        let total: i64 = w.iter().sum();
        (total > 0).then(|| w.into_iter().map(|k| Rational::new(k, total)).collect())
    })
}

fn sized_pair() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
    (1usize..7).prop_flat_map(|n| (distribution(n), distribution(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coupling_has_the_right_marginals((p, q) in sized_pair()) {
        let n = p.len();
        let pi = maximal_coupling(&p, &q).unwrap();
        for s in 0..n {
            let row: Rational = pi[s * n..(s + 1) * n].iter().sum();
            let col: Rational = (0..n).map(|t| &pi[t * n + s]).sum();
            prop_assert_eq!(row, p[s].clone());
            prop_assert_eq!(col, q[s].clone());
        }
        let off: Rational = (0..n * n).filter(|e| e / n != e % n).map(|e| &pi[e]).sum();
        prop_assert_eq!(off, trace_distance(&p, &q).unwrap());
    }

    #[test]
    fn fuchs_van_de_graaf((p, q) in sized_pair()) {
        let f = fidelity(&p, &q).unwrap();
        let d = trace_distance(&p, &q).unwrap().to_f64();
        prop_assert!(1.0 - f <= d + 1e-9);
        prop_assert!(d <= (1.0 - f * f).max(0.0).sqrt() + 1e-9);
    }

    #[test]
    fn snos_closed_form_matches_lp(seed in any::<u64>(), players in 2usize..4, kind in 0u8..3) {
        let scenario = Scenario::binary(players);
        let p = match kind {
            0 => random_correlation(seed, &scenario),
            1 => random_snos_correlation(seed, &scenario),
            _ => random_ns_correlation(seed, &scenario),
        };
        prop_assert_eq!(is_snos(&p).member, snos_feasible_by_lp(&p).unwrap());
        prop_assert_eq!(
            is_ns(&p, NsMode::SinglesComplement).member,
            is_ns(&p, NsMode::AllSubsets).member
        );
    }

    #[test]
    fn ns_is_contained_in_snos(seed in any::<u64>(), players in 1usize..4) {
        let p = random_ns_correlation(seed, &Scenario::binary(players));
        prop_assert!(is_ns(&p, NsMode::AllSubsets).member);
        prop_assert!(is_snos(&p).member);
    }

    #[test]
    fn tensor_products_stay_no_signalling(a in any::<u64>(), b in any::<u64>()) {
        let scenario = Scenario::binary(2);
        let p = random_ns_correlation(a, &scenario).tensor(&random_ns_correlation(b, &scenario)).unwrap();
        prop_assert!(is_ns(&p, NsMode::AllSubsets).member);
    }

    #[test]
    fn bump_up_dominates(seed in any::<u64>()) {
        let p = random_snos_correlation(seed, &Scenario::binary(2));
        let q = bump_up(&p).unwrap();
        prop_assert!(is_ns(&q, NsMode::AllSubsets).member);
        prop_assert!(q.densities().iter().zip(p.densities()).all(|(a, b)| a >= b));
    }

    #[test]
    fn nearest_ns_is_a_projection(seed in any::<u64>(), weights in distribution(4), answers in prop::collection::vec(0usize..4, 4)) {
        let scenario = Scenario::binary(2);
        let ns = random_ns_correlation(seed, &scenario);
        let (projected, distance) = nearest_ns(&weights, &ns).unwrap();
        prop_assert!(distance.is_zero());
        prop_assert!(is_ns(&projected, NsMode::AllSubsets).member);
        // A deterministic table mapping each input pair to a joint answer; signalling in general.
        let p = Correlation::from_fn(scenario.clone(), |a, x| {
            if answers[2 * x[0] + x[1]] == 2 * a[0] + a[1] { Rational::one() } else { Rational::zero() }
        })
        .unwrap();
        let (projected, distance) = nearest_ns(&weights, &p).unwrap();
        prop_assert!(is_ns(&projected, NsMode::AllSubsets).member);
        let cost = |q: &Correlation| -> Rational {
            (0..4)
                .flat_map(|x| (0..4).map(move |a| (a, x)))
                .map(|(a, x)| &weights[x] * &(q.get(a, x) - p.get(a, x)).abs())
                .sum::<Rational>()
                * Rational::new(1, 2)
        };
        prop_assert_eq!(cost(&projected), distance.clone());
        prop_assert!(distance <= cost(&Correlation::uniform(scenario.clone())));
        prop_assert!(distance <= cost(&ns));
    }

    #[test]
    fn value_ordering(seed in any::<u64>(), full in any::<bool>(), p in 0.0f64..=1.0) {
        let game = random_binary_game(seed, 2, full, p).unwrap();
        let c = value_classical(&game).unwrap().value;
        let ns = value_ns(&game).unwrap().value;
        let snos = value_snos(&game).unwrap().value;
        prop_assert!(c <= ns);
        prop_assert_eq!(&ns, &snos);
        prop_assert!(snos <= Rational::one());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), players in 1usize..4) {
        let game = random_binary_game(seed, players, false, 0.5).unwrap();
        let back = Document::parse(&Document::from_game(&game).to_json()).unwrap().game().unwrap();
        prop_assert_eq!(back, game);
        let p: Correlation = random_correlation(seed, &Scenario::binary(players));
        let back = Document::parse(&Document::from_correlation(&p).to_json()).unwrap().correlation().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn bounds_are_monotone(delta in 0.0f64..1.0, step in 0.0f64..0.5, n in 1u64..200, players in 1usize..6) {
        let larger = (delta + step).min(1.0);
        prop_assert!(bound_thm1_repetition(larger, players, n).unwrap() <= bound_thm1_repetition(delta, players, n).unwrap());
        prop_assert!(bound_thm1_repetition(delta, players, n + 1).unwrap() <= bound_thm1_repetition(delta, players, n).unwrap());
        prop_assert!(bound_thm1_repetition(delta, players + 1, n).unwrap() >= bound_thm1_repetition(delta, players, n).unwrap());
        prop_assert!(bound_thm1_concentration(larger, players, n).unwrap() <= bound_thm1_concentration(delta, players, n).unwrap());
        for kind in [BoundKind::Repetition, BoundKind::Concentration] {
            prop_assert!(bound_thm3(kind, larger, n).unwrap() <= bound_thm3(kind, delta, n).unwrap());
        }
        let (first, _) = split_bound(BoundKind::Repetition, delta, players, n, 0.0).unwrap();
        prop_assert!((first - (1.0 - delta).powf(n as f64)).abs() <= 1e-12);
    }
}

#[test]
fn sandwich_on_small_random_games() {
    for seed in 0..4 {
        let game = random_binary_game(seed, 2, seed % 2 == 0, 0.6).unwrap();
        let single = value_ns(&game).unwrap().value;
        let repeated = value_ns(&repeat_game(&game, 2).unwrap()).unwrap().value;
        assert!(single.pow(2) <= repeated && repeated <= single);
    }
}
