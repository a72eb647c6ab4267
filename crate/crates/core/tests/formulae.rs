mod common;

use nfu_core::formulae::{comprehension_axiom, parse_formula, stratify, Formula};
use proptest::prelude::*;

fn var() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "z", "v0", "a1"]).prop_map(str::to_string)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (var(), var()).prop_map(|(a, b)| Formula::eq(a, b)),
        (var(), var()).prop_map(|(a, b)| Formula::member(a, b)),
        var().prop_map(Formula::is_set),
        (var(), var(), var()).prop_map(|(a, b, c)| Formula::pair(a, b, c)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var(), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (var(), inner).prop_map(|(v, a)| Formula::exists(v, a)),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(phi in formula()) {
        let text = phi.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), phi);
    }

    #[test]
    fn certificates_are_sound(phi in formula()) {
        match stratify(&phi) {
            Ok(s) => prop_assert!(common::assignment_ok(&phi, &s.assignment)),
            Err(f) => {
                prop_assert!(f.is_closed_walk());
                prop_assert_ne!(f.offset_sum(), 0);
            }
        }
    }
}

#[test]
fn stratifier_matches_brute_force_on_corpus_sample() {
    for phi in common::formula_corpus().iter().step_by(7) {
        assert_eq!(
            stratify(phi).is_ok(),
            common::brute_stratifiable(phi, 4),
            "{phi}"
        );
    }
}

#[test]
fn russell_has_a_one_step_cycle() {
    let f = stratify(&parse_formula("not (x in x)").unwrap()).unwrap_err();
    assert_eq!(f.cycle.len(), 1);
    assert_eq!(f.offset_sum(), 1);
}

#[test]
fn unstratified_formulas_have_no_axiom() {
    let phi = parse_formula("v0 in v0").unwrap();
    assert!(comprehension_axiom(&phi, &[]).is_err());
    let phi = parse_formula("v0 in y").unwrap();
    let ax = comprehension_axiom(&phi, &["y".to_string()]).unwrap();
    assert!(stratify(&ax).is_ok());
}
