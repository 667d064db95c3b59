mod common;

use std::collections::BTreeSet;

use common::*;
use modsm::algebra::{check_module_theorem, check_semantical_join, compose, join, join_all, natural_join};
use modsm::semantics::stable_models;
use modsm::{Atom, CompositionError, Error, Interpretation, Limits, ModelSet, Module, Strategy};
use proptest::prelude::*;

fn sm(m: &Module) -> ModelSet {
    stable_models(m, Strategy::BruteForce, &Limits::default()).unwrap()
}

/// Pairs of models agreeing on the shared atoms, merged.
fn oracle_natural_join(a: &ModelSet, b: &ModelSet, p: &Module, q: &Module) -> ModelSet {
    let shared: BTreeSet<Atom> = p.visible().intersection(&q.visible()).copied().collect();
    let mut out = ModelSet::new();
    for x in a {
        for y in b {
            if x.restrict(&shared) == y.restrict(&shared) {
                out.insert(x.union(y));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn module_theorem(seed: u64, atoms in 2usize..11, normal: bool) {
        let (p, q) = random_joinable_pair(&mut rng(seed), "mt", atoms, 8, normal);
        let report = check_module_theorem(&p, &q, &Limits::default()).unwrap();
        prop_assert!(report.holds());
        prop_assert_eq!(&report.natural, &oracle_natural_join(&sm(&p), &sm(&q), &p, &q));
        prop_assert!(check_semantical_join(&p, &q, &Limits::default()).unwrap().defined());
    }

    #[test]
    fn join_is_commutative(seed: u64, atoms in 2usize..11) {
        let (p, q) = random_joinable_pair(&mut rng(seed), "jc", atoms, 8, false);
        prop_assert_eq!(join(&p, &q).unwrap(), join(&q, &p).unwrap());
    }

    #[test]
    fn join_all_agrees_with_folding(seed: u64, atoms in 2usize..10) {
        let mut r = rng(seed);
        let (p, q) = random_joinable_pair(&mut r, "jf", atoms, 6, false);
        let (s, t) = random_joinable_pair(&mut r, "jg", atoms, 6, false);
        let all = [p, q, s, t];
        let folded = all[1..].iter().try_fold(all[0].clone(), |acc, m| join(&acc, m));
        match (join_all(&all), folded) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn natural_join_matches_oracle(seed: u64, atoms in 2usize..10) {
        let (p, q) = random_joinable_pair(&mut rng(seed), "nj", atoms, 8, false);
        let (a, b) = (sm(&p), sm(&q));
        prop_assert_eq!(natural_join(&a, &b, &p, &q), oracle_natural_join(&a, &b, &p, &q));
    }
}

#[test]
fn composition_errors() {
    let p = text("#output a. a.");
    let q = text("#input b. #output a. a :- b.");
    assert!(matches!(
        compose(&p, &q),
        Err(Error::Composition(CompositionError::OutputClash(_)))
    ));

    let p = text("#output a. #hidden h. a :- h. h.");
    let q = text("#input h. #output b. b :- h.");
    assert!(matches!(
        compose(&p, &q),
        Err(Error::Composition(CompositionError::HiddenLeak(_)))
    ));

    let (p, q) = gs_pair();
    assert!(compose(&p, &q).is_ok());
    match join(&p, &q) {
        Err(Error::Composition(e)) => assert_eq!(e.to_string(), "MutualDependence({a,b})"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn composition_of_gs_modules_loses_models() {
    let (p, q) = gs_pair();
    let c = compose(&p, &q).unwrap();
    assert_eq!(sm(&c), modsm::interpretation::model_set(&[&[]]));
    let report = check_semantical_join(&p, &q, &Limits::default()).unwrap();
    assert!(!report.defined());
    let natural = natural_join(&sm(&p), &sm(&q), &p, &q);
    assert!(natural.contains(&Interpretation::from_names(["a", "b"])));
}

#[test]
fn negative_cycle_is_joinable() {
    let parts = cycle_triple();
    let joined = join_all(&parts).unwrap();
    assert!(joined.input().is_empty());
    assert!(sm(&joined).is_empty());
    let report = modsm::algebra::check_module_theorem_all(&parts, &Limits::default()).unwrap();
    assert!(report.holds());
}

#[test]
fn frozen_joinable_pair_counts() {
    let mut r = rng(4242);
    let counts: Vec<(usize, usize, usize)> = (0..8)
        .map(|_| {
            let (p, q) = random_joinable_pair(&mut r, "fj", 8, 6, false);
            let j = join(&p, &q).unwrap();
            let natural = oracle_natural_join(&sm(&p), &sm(&q), &p, &q);
            assert_eq!(sm(&j), natural);
            (sm(&p).len(), sm(&q).len(), natural.len())
        })
        .collect();
    assert_eq!(counts, FROZEN);
}

const FROZEN: [(usize, usize, usize); 8] = [
    (32, 4, 64),
    (2, 4, 2),
    (44, 4, 6),
    (5, 32, 5),
    (64, 8, 32),
    (1, 5, 2),
    (1, 4, 4),
    (16, 8, 8),
];
