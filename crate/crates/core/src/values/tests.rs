use super::*;
use crate::catalog::{anticorrelation_game, chsh_game, random_binary_game};
use crate::game::{repeat_game, threshold_game};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[test]
fn anticorrelation_values() {
    let g = anticorrelation_game();
    assert_eq!(value_ns(&g).unwrap().value, r(2, 3));
    assert_eq!(value_snos(&g).unwrap().value, r(1, 1));
    assert_eq!(value_classical(&g).unwrap().value, r(2, 3));
}

#[test]
fn chsh_values() {
    let g = chsh_game();
    assert_eq!(value_ns(&g).unwrap().value, r(1, 1));
    assert_eq!(value_snos(&g).unwrap().value, r(1, 1));
    let c = value_classical(&g).unwrap();
    assert_eq!(c.value, r(3, 4));
    // all-zero responses already win 3/4 and come first
    assert_eq!(c.strategy, Correlation::deterministic(g.scenario().clone(), &[vec![0, 0], vec![0, 0]]).unwrap());
}

#[test]
fn constant_predicates() {
    let g = chsh_game();
    let yes = g.with_predicate(vec![true; 16]).unwrap();
    let no = g.with_predicate(vec![false; 16]).unwrap();
    for model in [Model::Ns, Model::Snos, Model::Classical] {
        assert_eq!(value(&yes, model).unwrap().value, r(1, 1));
        assert_eq!(value(&no, model).unwrap().value, r(0, 1));
    }
}

#[test]
fn threshold_one_of_two_chsh() {
    let g = threshold_game(&chsh_game(), 1, 2).unwrap();
    assert_eq!(value_ns(&g).unwrap().value, r(1, 1));
}

#[test]
fn chsh_squared_is_won() {
    let g = repeat_game(&chsh_game(), 2).unwrap();
    assert_eq!(value_ns(&g).unwrap().value, r(1, 1));
    assert_eq!(value_classical(&g).unwrap().value, value_classical_with(&g, &Limits::default()).unwrap().value);
}

#[test]
fn two_player_collapse_and_ordering() {
    for seed in 0..15 {
        let g = random_binary_game(seed, 2, seed % 2 == 0, 0.5).unwrap();
        let (c, ns, snos) = (value_classical(&g).unwrap(), value_ns(&g).unwrap(), value_snos(&g).unwrap());
        assert_eq!(ns.value, snos.value, "seed {seed}");
        assert!(c.value <= ns.value);
        assert_eq!(g.winning_probability(&c.strategy).unwrap(), c.value);
    }
}

#[test]
fn three_player_ordering() {
    for seed in 0..6 {
        let g = random_binary_game(seed, 3, true, 0.6).unwrap();
        let (c, ns, snos) = (value_classical(&g).unwrap(), value_ns(&g).unwrap(), value_snos(&g).unwrap());
        assert!(c.value <= ns.value && ns.value <= snos.value, "seed {seed}");
    }
}

#[test]
fn caps_are_enforced() {
    let tight = Limits { max_table_entries: 10, max_deterministic_strategies: 10 };
    assert!(matches!(value_ns_with(&chsh_game(), &tight), Err(Error::Resource { required: 16, .. })));
    assert!(matches!(value_classical_with(&chsh_game(), &tight), Err(Error::Resource { required: 16, .. })));
}

#[test]
fn model_names_round_trip() {
    for m in [Model::Ns, Model::Snos, Model::Classical] {
        assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
    }
    assert!("quantum".parse::<Model>().is_err());
}
