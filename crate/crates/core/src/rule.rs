//! Canonical rules: weight rules and choice rules.
//!
//! Every other rule form (basic, cardinality, integrity constraint, compute
//! statement) is sugar and is lowered by [`crate::desugar`].

use std::collections::BTreeMap;

use crate::atom::{Atom, AtomSet};

/// A body literal with its weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightedLiteral {
    pub atom: Atom,
    pub weight: u64,
}

impl WeightedLiteral {
    pub fn new(atom: Atom, weight: u64) -> Self {
        WeightedLiteral { atom, weight }
    }
}

/// `head ← bound ≤ {pos, not neg}`.
///
/// Literals are sorted by atom and each atom occurs at most once per
/// polarity; duplicates are merged by summing their weights.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightRule {
    pub head: Atom,
    pub bound: u64,
    pub pos: Vec<WeightedLiteral>,
    pub neg: Vec<WeightedLiteral>,
}

/// `{heads} ← pos, not neg` with a non-empty head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceRule {
    pub heads: Vec<Atom>,
    pub pos: Vec<Atom>,
    pub neg: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Weight(WeightRule),
    Choice(ChoiceRule),
}

fn merge_weights(lits: impl IntoIterator<Item = (Atom, u64)>) -> Vec<WeightedLiteral> {
    let mut merged: BTreeMap<Atom, u64> = BTreeMap::new();
    for (atom, w) in lits {
        *merged.entry(atom).or_default() += w;
    }
    merged
        .into_iter()
        .map(|(atom, weight)| WeightedLiteral { atom, weight })
        .collect()
}

fn sorted_set(atoms: impl IntoIterator<Item = Atom>) -> Vec<Atom> {
    let mut v: Vec<Atom> = atoms.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl WeightRule {
    pub fn new(
        head: Atom,
        bound: u64,
        pos: impl IntoIterator<Item = (Atom, u64)>,
        neg: impl IntoIterator<Item = (Atom, u64)>,
    ) -> Self {
        WeightRule {
            head,
            bound,
            pos: merge_weights(pos),
            neg: merge_weights(neg),
        }
    }

    /// `head ← pos, not neg` as a weight rule with unit weights and
    /// bound `|pos| + |neg|`.
    pub fn basic(head: Atom, pos: impl IntoIterator<Item = Atom>, neg: impl IntoIterator<Item = Atom>) -> Self {
        let pos = sorted_set(pos);
        let neg = sorted_set(neg);
        let bound = (pos.len() + neg.len()) as u64;
        WeightRule {
            head,
            bound,
            pos: pos.into_iter().map(|a| WeightedLiteral::new(a, 1)).collect(),
            neg: neg.into_iter().map(|a| WeightedLiteral::new(a, 1)).collect(),
        }
    }

    pub fn fact(head: Atom) -> Self {
        WeightRule::basic(head, [], [])
    }

    pub fn total_weight(&self) -> u64 {
        self.pos.iter().chain(&self.neg).map(|l| l.weight).sum()
    }

    /// All weights are one.
    pub fn has_unit_weights(&self) -> bool {
        self.pos.iter().chain(&self.neg).all(|l| l.weight == 1)
    }

    /// A basic rule: unit weights and a bound equal to the number of literals.
    pub fn is_basic(&self) -> bool {
        self.has_unit_weights() && self.bound == (self.pos.len() + self.neg.len()) as u64
    }

    /// Weight of the body in `m`.
    pub fn body_weight(&self, m: impl Fn(Atom) -> bool) -> u64 {
        let p: u64 = self.pos.iter().filter(|l| m(l.atom)).map(|l| l.weight).sum();
        let n: u64 = self.neg.iter().filter(|l| !m(l.atom)).map(|l| l.weight).sum();
        p + n
    }
}

impl ChoiceRule {
    /// Returns `None` when `heads` is empty.
    pub fn new(
        heads: impl IntoIterator<Item = Atom>,
        pos: impl IntoIterator<Item = Atom>,
        neg: impl IntoIterator<Item = Atom>,
    ) -> Option<Self> {
        let heads = sorted_set(heads);
        if heads.is_empty() {
            return None;
        }
        Some(ChoiceRule {
            heads,
            pos: sorted_set(pos),
            neg: sorted_set(neg),
        })
    }
}

impl Rule {
    pub fn basic(head: Atom, pos: impl IntoIterator<Item = Atom>, neg: impl IntoIterator<Item = Atom>) -> Rule {
        Rule::Weight(WeightRule::basic(head, pos, neg))
    }

    pub fn fact(head: Atom) -> Rule {
        Rule::Weight(WeightRule::fact(head))
    }

    pub fn weight(
        head: Atom,
        bound: u64,
        pos: impl IntoIterator<Item = (Atom, u64)>,
        neg: impl IntoIterator<Item = (Atom, u64)>,
    ) -> Rule {
        Rule::Weight(WeightRule::new(head, bound, pos, neg))
    }

    /// Panics on an empty head; use [`ChoiceRule::new`] for fallible input.
    pub fn choice(
        heads: impl IntoIterator<Item = Atom>,
        pos: impl IntoIterator<Item = Atom>,
        neg: impl IntoIterator<Item = Atom>,
    ) -> Rule {
        Rule::Choice(ChoiceRule::new(heads, pos, neg).expect("choice rule with empty head"))
    }

    pub fn heads(&self) -> &[Atom] {
        match self {
            Rule::Weight(r) => std::slice::from_ref(&r.head),
            Rule::Choice(r) => &r.heads,
        }
    }

    pub fn pos_atoms(&self) -> Box<dyn Iterator<Item = Atom> + '_> {
        match self {
            Rule::Weight(r) => Box::new(r.pos.iter().map(|l| l.atom)),
            Rule::Choice(r) => Box::new(r.pos.iter().copied()),
        }
    }

    pub fn neg_atoms(&self) -> Box<dyn Iterator<Item = Atom> + '_> {
        match self {
            Rule::Weight(r) => Box::new(r.neg.iter().map(|l| l.atom)),
            Rule::Choice(r) => Box::new(r.neg.iter().copied()),
        }
    }

    pub fn body_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.pos_atoms().chain(self.neg_atoms())
    }

    /// Every atom occurring in the rule.
    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.heads().iter().copied().chain(self.body_atoms())
    }

    pub fn is_choice(&self) -> bool {
        matches!(self, Rule::Choice(_))
    }

    pub fn is_basic(&self) -> bool {
        matches!(self, Rule::Weight(r) if r.is_basic())
    }

    /// Replaces atoms according to `f`, re-normalizing the rule.
    pub fn map_atoms(&self, f: impl Fn(Atom) -> Atom) -> Rule {
        match self {
            Rule::Weight(r) => Rule::Weight(WeightRule::new(
                f(r.head),
                r.bound,
                r.pos.iter().map(|l| (f(l.atom), l.weight)),
                r.neg.iter().map(|l| (f(l.atom), l.weight)),
            )),
            Rule::Choice(r) => Rule::Choice(ChoiceRule {
                heads: sorted_set(r.heads.iter().map(|&a| f(a))),
                pos: sorted_set(r.pos.iter().map(|&a| f(a))),
                neg: sorted_set(r.neg.iter().map(|&a| f(a))),
            }),
        }
    }
}

/// Hb(R): every atom occurring in `rules`.
pub fn rule_atoms<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> AtomSet {
    rules.into_iter().flat_map(|r| r.atoms()).collect()
}

/// head(R).
pub fn head_atoms<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> AtomSet {
    rules.into_iter().flat_map(|r| r.heads().iter().copied()).collect()
}

/// body(R): atoms with a positive or negative body occurrence.
pub fn body_atoms<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> AtomSet {
    rules.into_iter().flat_map(|r| r.body_atoms()).collect()
}

/// choiceheads(R).
pub fn choice_heads<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> AtomSet {
    rules
        .into_iter()
        .filter_map(|r| match r {
            Rule::Choice(c) => Some(c.heads.iter().copied()),
            Rule::Weight(_) => None,
        })
        .flatten()
        .collect()
}
