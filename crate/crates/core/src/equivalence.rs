//! Weak, visible, modular and semantical modular equivalence; the input
//! generator module and the EVA property.

use std::collections::BTreeMap;

use crate::algebra::{check_semantical_join, compose, join};
use crate::atom::AtomSet;
use crate::error::{Error, Result};
use crate::interpretation::{Interpretation, ModelSet};
use crate::module::Module;
use crate::rule::{ChoiceRule, Rule};
use crate::semantics::{stable_models, Limits, Strategy};

/// `SM(P) = SM(Q)` for modules without input atoms.
pub fn weak_eq(p: &Module, q: &Module, limits: &Limits) -> Result<bool> {
    if !p.input().is_empty() || !q.input().is_empty() {
        return Err(Error::NonGroundInput);
    }
    Ok(stable_models(p, Strategy::BruteForce, limits)? == stable_models(q, Strategy::BruteForce, limits)?)
}

/// Counts of the projections `M ∩ S` over a model set.
pub fn projection_counts(models: &ModelSet, onto: &AtomSet) -> BTreeMap<Interpretation, usize> {
    let mut counts = BTreeMap::new();
    for m in models {
        *counts.entry(m.restrict(onto)).or_insert(0) += 1;
    }
    counts
}

/// `P ≡v Q`: equal visible signatures and a bijection between stable models
/// preserving visible projections.
pub fn visible_eq(p: &Module, q: &Module, limits: &Limits) -> Result<bool> {
    let vis = p.visible();
    if vis != q.visible() {
        return Ok(false);
    }
    let sp = stable_models(p, Strategy::BruteForce, limits)?;
    let sq = stable_models(q, Strategy::BruteForce, limits)?;
    Ok(projection_counts(&sp, &vis) == projection_counts(&sq, &vis))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Compare input signatures, then check visible equivalence.
    #[default]
    Direct,
    /// Join both modules with the input generator and check visible
    /// equivalence of the results.
    Generator,
}

/// `G_I = ⟨{{I} ←}, ∅, I, ∅⟩`; the empty module when `I = ∅`.
pub fn generator(input: &AtomSet) -> Module {
    let rules: Vec<Rule> = ChoiceRule::new(input.iter().copied(), [], [])
        .map(Rule::Choice)
        .into_iter()
        .collect();
    Module::from_parts(rules, AtomSet::new(), input.clone(), AtomSet::new())
}

/// `P ≡m Q`.
pub fn modular_eq(p: &Module, q: &Module, method: Method, limits: &Limits) -> Result<bool> {
    match method {
        Method::Direct => Ok(p.input() == q.input() && visible_eq(p, q, limits)?),
        Method::Generator => {
            if p.input() != q.input() || p.output() != q.output() {
                return Err(Error::InterfaceMismatch);
            }
            let g = generator(p.input());
            visible_eq(&join(p, &g)?, &join(q, &g)?, limits)
        }
    }
}

/// `hid(R)`: rules with a hidden head; choice rules are projected to their
/// hidden heads.
pub fn hidden_rules(m: &Module) -> Vec<Rule> {
    let h = m.hidden();
    m.rules()
        .iter()
        .filter_map(|r| match r {
            Rule::Weight(w) => h.contains(&w.head).then(|| r.clone()),
            Rule::Choice(c) => ChoiceRule::new(
                c.heads.iter().copied().filter(|a| h.contains(a)),
                c.pos.iter().copied(),
                c.neg.iter().copied(),
            )
            .map(Rule::Choice),
        })
        .collect()
}

/// `hid(P) = ⟨hid(R), I ∪ O, H, ∅⟩`.
pub fn hidden_part(m: &Module) -> Module {
    Module::new_unchecked(hidden_rules(m), m.visible(), m.hidden().clone(), AtomSet::new())
}

/// The EVA property: `hid(P)` has exactly one stable model for every
/// interpretation of its input signature.
///
/// Only visible atoms occurring in `hid(R)` are enumerated; the others do not
/// influence the hidden part.
pub fn eva(m: &Module, limits: &Limits) -> Result<bool> {
    if m.hidden().is_empty() {
        return Ok(true);
    }
    let rules = hidden_rules(m);
    let used: AtomSet = crate::rule::rule_atoms(&rules)
        .intersection(&m.visible())
        .copied()
        .collect();
    let reduced = Module::new_unchecked(rules, used.clone(), m.hidden().clone(), AtomSet::new());
    let models = stable_models(&reduced, Strategy::BruteForce, limits)?;
    let counts = projection_counts(&models, &used);
    Ok(counts.len() == 1usize << used.len() && counts.values().all(|&c| c == 1))
}

/// Result of sampling the semantical modular equivalence definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledEquivalence {
    /// Contexts for which both semantical joins were defined.
    pub checked: usize,
    /// Contexts skipped because a composition or semantical join was undefined.
    pub skipped: usize,
    /// Index of the first context separating the modules.
    pub counterexample: Option<usize>,
}

impl SampledEquivalence {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `P ⊔sem R ≡v Q ⊔sem R` for each supplied context `R`.
pub fn sem_modular_eq_sampled(
    p: &Module,
    q: &Module,
    contexts: &[Module],
    limits: &Limits,
) -> Result<SampledEquivalence> {
    let mut out = SampledEquivalence {
        checked: 0,
        skipped: 0,
        counterexample: None,
    };
    if p.input() != q.input() {
        out.counterexample = Some(0);
        return Ok(out);
    }
    for (k, r) in contexts.iter().enumerate() {
        let (Ok(pr), Ok(qr)) = (compose(p, r), compose(q, r)) else {
            out.skipped += 1;
            continue;
        };
        if !check_semantical_join(p, r, limits)?.defined() || !check_semantical_join(q, r, limits)?.defined() {
            out.skipped += 1;
            continue;
        }
        out.checked += 1;
        if !visible_eq(&pr, &qr, limits)? {
            out.counterexample = Some(k);
            break;
        }
    }
    Ok(out)
}
