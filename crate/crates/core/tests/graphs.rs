mod common;

use std::collections::BTreeSet;

use common::*;
use modsm::graphs::{dep_graph, loops, sccs, tarjan, DepMode};
use modsm::{Atom, AtomSet, Module};
use proptest::prelude::*;

fn closure(m: &Module, mode: DepMode) -> (Vec<Atom>, Vec<Vec<bool>>) {
    let atoms: Vec<Atom> = m.atoms().into_iter().collect();
    let ix = |x: &Atom| atoms.iter().position(|y| y == x).unwrap();
    let n = atoms.len();
    let mut reach = vec![vec![false; n]; n];
    for r in m.rules() {
        let body: Vec<Atom> = match mode {
            DepMode::Positive => r.pos_atoms().collect(),
            DepMode::PositiveNegative => r.body_atoms().collect(),
        };
        for b in &body {
            for h in r.heads() {
                reach[ix(b)][ix(h)] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    (atoms, reach)
}

fn oracle_components(m: &Module, mode: DepMode) -> BTreeSet<AtomSet> {
    let (atoms, reach) = closure(m, mode);
    (0..atoms.len())
        .map(|i| {
            (0..atoms.len())
                .filter(|&j| i == j || (reach[i][j] && reach[j][i]))
                .map(|j| atoms[j])
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn components_match_transitive_closure(seed: u64, atoms in 1usize..14, rules in 0usize..20, neg: bool) {
        let m = random_module(&mut rng(seed), "g", Shape::smodels(atoms, rules));
        let mode = if neg { DepMode::PositiveNegative } else { DepMode::Positive };
        let part = sccs(&dep_graph(&m, mode));
        let got: BTreeSet<AtomSet> = part.components.iter().cloned().collect();
        prop_assert_eq!(got.len(), part.len());
        prop_assert_eq!(got, oracle_components(&m, mode));
    }

    #[test]
    fn components_are_topologically_ordered(seed: u64, atoms in 1usize..14, rules in 0usize..20) {
        let m = random_module(&mut rng(seed), "g", Shape::smodels(atoms, rules));
        let g = dep_graph(&m, DepMode::Positive);
        let at = sccs(&g).component_index();
        for (b, h) in g.edges() {
            prop_assert!(at[&b] <= at[&h]);
        }
    }

    #[test]
    fn loops_are_strongly_connected(seed: u64, atoms in 1usize..8, rules in 0usize..12) {
        let m = random_module(&mut rng(seed), "g", Shape::smodels(atoms, rules));
        let (all, reach) = closure(&m, DepMode::Positive);
        let ix = |x: &Atom| all.iter().position(|y| y == x).unwrap();
        let found = loops(m.rules(), 20).unwrap();
        for l in &found {
            let sub = Module::from_program(
                m.rules().iter().filter(|r| r.heads().iter().any(|h| l.contains(h))).cloned(),
            );
            let inner = oracle_components(&restrict(&sub, l), DepMode::Positive);
            prop_assert!(inner.contains(l), "{:?} is not strongly connected", l);
            if l.len() == 1 {
                let x = l.iter().next().unwrap();
                prop_assert!(reach[ix(x)][ix(x)]);
            }
        }
    }
}

fn restrict(m: &Module, l: &AtomSet) -> Module {
    Module::from_program(m.rules().iter().filter_map(|r| {
        let heads: Vec<Atom> = r.heads().iter().copied().filter(|h| l.contains(h)).collect();
        let pos: Vec<Atom> = r.pos_atoms().filter(|b| l.contains(b)).collect();
        (!heads.is_empty()).then(|| modsm::Rule::choice(heads, pos, []))
    }))
}

#[test]
fn tarjan_on_adjacency_lists() {
    let succ = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3], vec![]];
    let mut comps: Vec<Vec<u32>> = tarjan(&succ)
        .into_iter()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    comps.sort();
    assert_eq!(comps, vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
}

#[test]
fn deep_chain_does_not_overflow() {
    let n = 200_000;
    let succ: Vec<Vec<u32>> = (0..n)
        .map(|i| if i + 1 < n { vec![i as u32 + 1] } else { vec![0] })
        .collect();
    assert_eq!(tarjan(&succ).len(), 1);
}

#[test]
fn loops_of_a_cycle_with_chord() {
    let m = text("a :- b. b :- a. b :- c. c :- b. d :- d.");
    let found: BTreeSet<Vec<String>> = loops(m.rules(), 20)
        .unwrap()
        .into_iter()
        .map(|l| l.iter().map(|x| x.to_string()).collect())
        .collect();
    let expected: BTreeSet<Vec<String>> = [vec!["a", "b"], vec!["b", "c"], vec!["a", "b", "c"], vec!["d"]]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect())
        .collect();
    assert_eq!(found, expected);
}
