//! Satisfaction, reducts, least models and stable models of modules.
//!
//! Two independent routes compute stable models: a bit-parallel checker
//! over all candidate interpretations, and input instantiation combined with
//! the explicit reduct / least-model construction. Both must agree.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::atom::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::interpretation::{Interpretation, ModelSet};
use crate::module::Module;
use crate::rule::{Rule, WeightedLiteral};

/// Enumeration caps. `max_atoms` bounds the number of atoms whose subsets
/// are enumerated, i.e. at most `2^max_atoms` candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_atoms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_atoms: 20 }
    }
}

impl Limits {
    pub fn new(max_atoms: usize) -> Self {
        Limits { max_atoms }
    }

    pub(crate) fn check(&self, what: &str, needed: usize) -> Result<()> {
        if needed > self.max_atoms || needed > 62 {
            Err(Error::cap(what, needed, self.max_atoms.min(62)))
        } else {
            Ok(())
        }
    }
}

/// Classical satisfaction of a rule. Choice rules are always satisfied.
pub fn satisfies(m: &Interpretation, r: &Rule) -> bool {
    match r {
        Rule::Choice(_) => true,
        Rule::Weight(w) => w.body_weight(|a| m.contains(a)) < w.bound || m.contains(w.head),
    }
}

/// `head ← bound ≤ {body}` without negative literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositiveRule {
    pub head: Atom,
    pub bound: u64,
    pub body: Vec<WeightedLiteral>,
}

impl PositiveRule {
    pub fn basic(head: Atom, body: impl IntoIterator<Item = Atom>) -> Self {
        let mut body: Vec<Atom> = body.into_iter().collect();
        body.sort_unstable();
        body.dedup();
        PositiveRule {
            head,
            bound: body.len() as u64,
            body: body.into_iter().map(|a| WeightedLiteral::new(a, 1)).collect(),
        }
    }

    /// The rule can fire for some interpretation.
    pub fn is_live(&self) -> bool {
        self.body.iter().map(|l| l.weight).sum::<u64>() >= self.bound
    }

    /// Unit weights and bound equal to the body size.
    pub fn is_basic(&self) -> bool {
        self.body.iter().all(|l| l.weight == 1) && self.bound == self.body.len() as u64
    }

    fn fires(&self, m: &AtomSet) -> bool {
        self.body
            .iter()
            .filter(|l| m.contains(&l.atom))
            .map(|l| l.weight)
            .sum::<u64>()
            >= self.bound
    }
}

/// A positive program; it has a unique least model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PositiveProgram {
    pub rules: Vec<PositiveRule>,
}

impl PositiveProgram {
    /// Rules whose bound can be reached; the others never fire.
    pub fn live_rules(&self) -> Vec<PositiveRule> {
        let mut v: Vec<PositiveRule> = self.rules.iter().filter(|r| r.is_live()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn atoms(&self) -> AtomSet {
        self.rules
            .iter()
            .flat_map(|r| std::iter::once(r.head).chain(r.body.iter().map(|l| l.atom)))
            .collect()
    }
}

/// The reduct `R^{M,I}`: negative literals and input atoms are evaluated
/// in `M`.
pub fn reduct(m: &Module, model: &Interpretation) -> PositiveProgram {
    let input = m.input();
    let mut rules = Vec::new();
    for r in m.rules() {
        match r {
            Rule::Choice(c) => {
                let blocked = c.neg.iter().any(|a| model.contains(*a))
                    || c.pos.iter().any(|a| input.contains(a) && !model.contains(*a));
                if blocked {
                    continue;
                }
                let body: Vec<Atom> = c.pos.iter().copied().filter(|a| !input.contains(a)).collect();
                for &h in c.heads.iter().filter(|h| model.contains(**h)) {
                    rules.push(PositiveRule::basic(h, body.iter().copied()));
                }
            }
            Rule::Weight(w) => {
                let evaluated: u64 = w
                    .pos
                    .iter()
                    .filter(|l| input.contains(&l.atom) && model.contains(l.atom))
                    .map(|l| l.weight)
                    .sum::<u64>()
                    + w.neg
                        .iter()
                        .filter(|l| !model.contains(l.atom))
                        .map(|l| l.weight)
                        .sum::<u64>();
                rules.push(PositiveRule {
                    head: w.head,
                    bound: w.bound.saturating_sub(evaluated),
                    body: w.pos.iter().copied().filter(|l| !input.contains(&l.atom)).collect(),
                });
            }
        }
    }
    PositiveProgram { rules }
}

/// Least model by iterating the one-step consequence operator from ∅.
pub fn least_model(p: &PositiveProgram) -> Interpretation {
    let mut model = AtomSet::new();
    loop {
        let before = model.len();
        for r in &p.rules {
            if !model.contains(&r.head) && r.fires(&model) {
                model.insert(r.head);
            }
        }
        if model.len() == before {
            return Interpretation(model);
        }
    }
}

/// `M ∈ SM(P)` iff `M \ I = LM(R^{M,I})`.
pub fn is_stable(m: &Module, model: &Interpretation) -> bool {
    if !model.is_subset(&m.atoms()) {
        return false;
    }
    let lm = least_model(&reduct(m, model));
    let without_input: AtomSet = model.atoms().difference(m.input()).copied().collect();
    lm.0 == without_input
}

/// The alternative characterization through instantiation:
/// `M = LM(R^M ∪ {a. | a ∈ M ∩ I})`.
pub fn is_stable_instantiated(m: &Module, model: &Interpretation) -> bool {
    if !model.is_subset(&m.atoms()) {
        return false;
    }
    let actual = model.restrict(m.input());
    let inst = m.instantiate(&actual.0).expect("M ∩ I ⊆ I");
    least_model(&reduct(&inst, model)) == *model
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Check every subset of Hb(P).
    #[default]
    BruteForce,
    /// For each actual input `A ⊆ I`, solve `P(A)` over `2^(O∪H)`.
    Instantiate,
}

struct CompiledWeight {
    head: u64,
    bound: u64,
    pos_input: Vec<(u64, u64)>,
    pos_rest: Vec<(u64, u64)>,
    neg: Vec<(u64, u64)>,
}

struct CompiledChoice {
    heads: u64,
    pos_input: u64,
    pos_rest: u64,
    neg: u64,
}

/// Bitmask form of a module with at most 63 atoms.
pub(crate) struct Compiled {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
    input: u64,
    weights: Vec<CompiledWeight>,
    choices: Vec<CompiledChoice>,
}

impl Compiled {
    pub(crate) fn new(m: &Module) -> Compiled {
        let atoms: Vec<Atom> = m.atoms().into_iter().collect();
        assert!(atoms.len() < 64, "compiled modules hold at most 63 atoms");
        let index: HashMap<Atom, usize> = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let bit = |a: &Atom| 1u64 << index[a];
        let input: u64 = m.input().iter().map(bit).fold(0, |x, y| x | y);
        let mut weights = Vec::new();
        let mut choices = Vec::new();
        for r in m.rules() {
            match r {
                Rule::Weight(w) => {
                    let (pi, pr): (Vec<_>, Vec<_>) = w
                        .pos
                        .iter()
                        .map(|l| (bit(&l.atom), l.weight))
                        .partition(|(b, _)| b & input != 0);
                    weights.push(CompiledWeight {
                        head: bit(&w.head),
                        bound: w.bound,
                        pos_input: pi,
                        pos_rest: pr,
                        neg: w.neg.iter().map(|l| (bit(&l.atom), l.weight)).collect(),
                    });
                }
                Rule::Choice(c) => {
                    let mask = |v: &[Atom]| v.iter().map(bit).fold(0, |x, y| x | y);
                    let pos = mask(&c.pos);
                    choices.push(CompiledChoice {
                        heads: mask(&c.heads),
                        pos_input: pos & input,
                        pos_rest: pos & !input,
                        neg: mask(&c.neg),
                    });
                }
            }
        }
        Compiled {
            atoms,
            index,
            input,
            weights,
            choices,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.atoms.len()
    }

    pub(crate) fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub(crate) fn bit_of(&self, a: Atom) -> Option<u64> {
        self.index.get(&a).map(|&i| 1u64 << i)
    }

    pub(crate) fn interpretation(&self, mask: u64) -> Interpretation {
        let mut out = AtomSet::new();
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out.insert(self.atoms[i]);
        }
        Interpretation(out)
    }

    /// Least model of the reduct w.r.t. `m`, as a mask.
    fn reduct_least_model(&self, m: u64) -> u64 {
        let mut lm = 0u64;
        // Residual bounds depend on `m` only.
        let residual: Vec<u64> = self
            .weights
            .iter()
            .map(|w| {
                let evaluated: u64 = w
                    .pos_input
                    .iter()
                    .filter(|(b, _)| m & b != 0)
                    .map(|(_, x)| x)
                    .sum::<u64>()
                    + w.neg.iter().filter(|(b, _)| m & b == 0).map(|(_, x)| x).sum::<u64>();
                w.bound.saturating_sub(evaluated)
            })
            .collect();
        let active_choices: Vec<&CompiledChoice> = self
            .choices
            .iter()
            .filter(|c| c.neg & m == 0 && c.pos_input & !m == 0 && c.heads & m != 0)
            .collect();
        loop {
            let before = lm;
            for (w, &bound) in self.weights.iter().zip(&residual) {
                if lm & w.head != 0 {
                    continue;
                }
                let sum: u64 = w.pos_rest.iter().filter(|(b, _)| lm & b != 0).map(|(_, x)| x).sum();
                if sum >= bound {
                    lm |= w.head;
                }
            }
            for c in &active_choices {
                if c.pos_rest & !lm == 0 {
                    lm |= c.heads & m;
                }
            }
            if lm == before {
                return lm;
            }
        }
    }

    pub(crate) fn is_stable(&self, m: u64) -> bool {
        self.reduct_least_model(m) == m & !self.input
    }

    /// All stable models as masks, in increasing order.
    pub(crate) fn stable_masks(&self) -> Vec<u64> {
        let n = self.atoms.len();
        let total = 1u64 << n;
        if n <= 12 {
            (0..total).filter(|&m| self.is_stable(m)).collect()
        } else {
            (0..total).into_par_iter().filter(|&m| self.is_stable(m)).collect()
        }
    }
}

/// All stable models of `m`.
pub fn stable_models(m: &Module, strategy: Strategy, limits: &Limits) -> Result<ModelSet> {
    match strategy {
        Strategy::BruteForce => {
            limits.check("stable model enumeration", m.atoms().len())?;
            let c = Compiled::new(m);
            Ok(c.stable_masks()
                .into_iter()
                .map(|mask| c.interpretation(mask))
                .collect())
        }
        Strategy::Instantiate => {
            let inputs: Vec<Atom> = m.input().iter().copied().collect();
            limits.check("input assignments", inputs.len())?;
            let rest: Vec<Atom> = m.output().union(m.hidden()).copied().collect();
            limits.check("stable model enumeration per input", rest.len())?;
            let per_input = |a_mask: u64| -> Vec<Interpretation> {
                let actual: AtomSet = select(&inputs, a_mask);
                let inst = m.instantiate(&actual).expect("subset of input");
                (0..1u64 << rest.len())
                    .filter_map(|r_mask| {
                        let mut cand = actual.clone();
                        cand.extend(select(&rest, r_mask));
                        let cand = Interpretation(cand);
                        is_stable(&inst, &cand).then_some(cand)
                    })
                    .collect()
            };
            let found: Vec<Vec<Interpretation>> = (0..1u64 << inputs.len()).into_par_iter().map(per_input).collect();
            Ok(found.into_iter().flatten().collect())
        }
    }
}

fn select(atoms: &[Atom], mask: u64) -> AtomSet {
    atoms
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &a)| a)
        .collect()
}

/// All classical models of the rules of `m` over Hb(P).
pub fn classical_models(m: &Module, limits: &Limits) -> Result<ModelSet> {
    let atoms: Vec<Atom> = m.atoms().into_iter().collect();
    limits.check("classical model enumeration", atoms.len())?;
    Ok((0..1u64 << atoms.len())
        .map(|mask| Interpretation(select(&atoms, mask)))
        .filter(|i| m.rules().iter().all(|r| satisfies(i, r)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpretation::model_set;
    use crate::module::set;

    fn a(n: &str) -> Atom {
        Atom::named(n)
    }

    fn i(names: &[&str]) -> Interpretation {
        Interpretation::from_names(names.iter().copied())
    }

    #[test]
    fn satisfaction() {
        let r = Rule::weight(a("a"), 1, [(a("b"), 1)], []);
        assert!(!satisfies(&i(&["b"]), &r));
        assert!(satisfies(&i(&["a", "b"]), &r));
        let r2 = Rule::weight(a("a"), 2, [(a("b"), 1)], [(a("c"), 2)]);
        assert!(!satisfies(&i(&["b"]), &r2));
        assert!(satisfies(&i(&[]), &Rule::choice([a("a")], [], [])));
    }

    #[test]
    fn reduct_of_weight_rule_with_input() {
        let m = Module::new(
            [Rule::weight(a("a"), 3, [(a("b"), 2)], [(a("c"), 2)])],
            set(&["b"]),
            set(&["a", "c"]),
            set(&[]),
        )
        .unwrap();
        let red = reduct(&m, &i(&["b"]));
        assert_eq!(
            red.rules,
            vec![PositiveRule {
                head: a("a"),
                bound: 0,
                body: vec![]
            }]
        );
    }

    #[test]
    fn reduct_of_choice_outside_model_is_empty() {
        let m = Module::new(
            [Rule::choice([a("a")], [a("b")], [])],
            set(&["b"]),
            set(&["a"]),
            set(&[]),
        )
        .unwrap();
        assert!(reduct(&m, &i(&[])).rules.is_empty());
    }

    #[test]
    fn least_models() {
        let fact = PositiveProgram {
            rules: vec![PositiveRule::basic(a("a"), [])],
        };
        assert_eq!(least_model(&fact), i(&["a"]));
        let chain = PositiveProgram {
            rules: vec![
                PositiveRule {
                    head: a("a"),
                    bound: 1,
                    body: vec![WeightedLiteral::new(a("b"), 1)],
                },
                PositiveRule::basic(a("b"), []),
            ],
        };
        assert_eq!(least_model(&chain), i(&["a", "b"]));
    }

    #[test]
    fn unsupported_atom_is_not_stable() {
        let m = Module::new([Rule::basic(a("a"), [a("b")], [])], set(&["b"]), set(&["a"]), set(&[])).unwrap();
        assert!(!is_stable(&m, &i(&["a"])));
        assert!(is_stable(&m, &i(&["a", "b"])));
        assert!(is_stable(&m, &i(&[])));
        assert!(!is_stable(&m, &i(&["zzz_not_in_module"])));
    }

    #[test]
    fn both_strategies_on_splitting_example() {
        let p = Module::from_program([
            Rule::basic(a("a"), [], [a("b")]),
            Rule::basic(a("b"), [], [a("a")]),
            Rule::basic(a("c"), [a("a")], []),
        ]);
        let expected = model_set(&[&["a", "c"], &["b"]]);
        let lim = Limits::default();
        assert_eq!(stable_models(&p, Strategy::BruteForce, &lim).unwrap(), expected);
        assert_eq!(stable_models(&p, Strategy::Instantiate, &lim).unwrap(), expected);
    }

    #[test]
    fn choice_with_negated_self() {
        let m = Module::from_program([Rule::choice([a("a")], [], [a("a")])]);
        let sm = stable_models(&m, Strategy::BruteForce, &Limits::default()).unwrap();
        assert_eq!(sm, model_set(&[&[]]));
    }

    #[test]
    fn cap_is_enforced() {
        let rules: Vec<Rule> = (0..5).map(|k| Rule::choice([a(&format!("cap{k}"))], [], [])).collect();
        let m = Module::from_program(rules);
        let err = stable_models(&m, Strategy::BruteForce, &Limits::new(4)).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { needed: 5, .. }));
    }

    #[test]
    fn instantiated_characterization_agrees() {
        let m = Module::new(
            [Rule::basic(a("a"), [a("b")], []), Rule::choice([a("c")], [], [a("b")])],
            set(&["b"]),
            set(&["a", "c"]),
            set(&[]),
        )
        .unwrap();
        for mask in 0..8u32 {
            let names = ["a", "b", "c"];
            let cand = Interpretation::from_names((0..3).filter(|k| mask >> k & 1 == 1).map(|k| names[k]));
            assert_eq!(is_stable(&m, &cand), is_stable_instantiated(&m, &cand), "{cand}");
        }
    }
}
