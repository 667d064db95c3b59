//! Program modules `⟨R, I, O, H⟩`.

use std::fmt;

use crate::atom::{format_set, Atom, AtomSet};
use crate::error::{Error, Result};
use crate::rule::{self, Rule};

/// A module: a rule set with disjoint input, output and hidden signatures.
///
/// Rules are kept sorted and duplicate-free, so two modules are equal iff
/// they are syntactically equal as quadruples of sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Module {
    rules: Vec<Rule>,
    input: AtomSet,
    output: AtomSet,
    hidden: AtomSet,
}

/// A violated well-formedness condition, with the offending atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InputOutputOverlap(AtomSet),
    InputHiddenOverlap(AtomSet),
    OutputHiddenOverlap(AtomSet),
    Undeclared(AtomSet),
    HeadInInput(AtomSet),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InputOutputOverlap(s) => write!(f, "I∩O={}", format_set(s)),
            Violation::InputHiddenOverlap(s) => write!(f, "I∩H={}", format_set(s)),
            Violation::OutputHiddenOverlap(s) => write!(f, "O∩H={}", format_set(s)),
            Violation::Undeclared(s) => write!(f, "Hb(R)\\(I∪O∪H)={}", format_set(s)),
            Violation::HeadInInput(s) => write!(f, "head(R)∩I={}", format_set(s)),
        }
    }
}

pub(crate) fn normalize_rules(mut rules: Vec<Rule>) -> Vec<Rule> {
    rules.sort_unstable();
    rules.dedup();
    rules
}

impl Module {
    /// Builds a module and checks every well-formedness condition.
    pub fn new(
        rules: impl IntoIterator<Item = Rule>,
        input: AtomSet,
        output: AtomSet,
        hidden: AtomSet,
    ) -> Result<Module> {
        let m = Module::new_unchecked(rules, input, output, hidden);
        let violations = m.validate();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidModule(violations))
        }
    }

    /// Builds a module without checking it; see [`Module::validate`].
    pub fn new_unchecked(
        rules: impl IntoIterator<Item = Rule>,
        input: AtomSet,
        output: AtomSet,
        hidden: AtomSet,
    ) -> Module {
        Module {
            rules: normalize_rules(rules.into_iter().collect()),
            input,
            output,
            hidden,
        }
    }

    /// A plain program viewed as `⟨P, ∅, Hb(P), ∅⟩`.
    pub fn from_program(rules: impl IntoIterator<Item = Rule>) -> Module {
        let rules = normalize_rules(rules.into_iter().collect());
        let output = rule::rule_atoms(&rules);
        Module {
            rules,
            input: AtomSet::new(),
            output,
            hidden: AtomSet::new(),
        }
    }

    pub fn empty() -> Module {
        Module::default()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn input(&self) -> &AtomSet {
        &self.input
    }

    pub fn output(&self) -> &AtomSet {
        &self.output
    }

    pub fn hidden(&self) -> &AtomSet {
        &self.hidden
    }

    /// Hb(P) = I ∪ O ∪ H.
    pub fn atoms(&self) -> AtomSet {
        let mut s = self.input.clone();
        s.extend(&self.output);
        s.extend(&self.hidden);
        s
    }

    /// Hbv(P) = I ∪ O.
    pub fn visible(&self) -> AtomSet {
        self.input.union(&self.output).copied().collect()
    }

    /// Hb(R): atoms occurring in rules.
    pub fn rule_atoms(&self) -> AtomSet {
        rule::rule_atoms(&self.rules)
    }

    pub fn head_atoms(&self) -> AtomSet {
        rule::head_atoms(&self.rules)
    }

    pub fn choice_heads(&self) -> AtomSet {
        rule::choice_heads(&self.rules)
    }

    pub fn is_normal(&self) -> bool {
        self.rules.iter().all(Rule::is_basic)
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.atoms().is_empty()
    }

    /// Checks the four well-formedness conditions and reports every violation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let overlap = |a: &AtomSet, b: &AtomSet| -> AtomSet { a.intersection(b).copied().collect() };
        let io = overlap(&self.input, &self.output);
        if !io.is_empty() {
            out.push(Violation::InputOutputOverlap(io));
        }
        let ih = overlap(&self.input, &self.hidden);
        if !ih.is_empty() {
            out.push(Violation::InputHiddenOverlap(ih));
        }
        let oh = overlap(&self.output, &self.hidden);
        if !oh.is_empty() {
            out.push(Violation::OutputHiddenOverlap(oh));
        }
        let declared = self.atoms();
        let undeclared: AtomSet = self.rule_atoms().difference(&declared).copied().collect();
        if !undeclared.is_empty() {
            out.push(Violation::Undeclared(undeclared));
        }
        let heads = overlap(&self.head_atoms(), &self.input);
        if !heads.is_empty() {
            out.push(Violation::HeadInInput(heads));
        }
        out
    }

    /// `P(A) = ⟨R ∪ {a. | a ∈ A}, ∅, I ∪ O, H⟩`.
    pub fn instantiate(&self, actual: &AtomSet) -> Result<Module> {
        let stray: AtomSet = actual.difference(&self.input).copied().collect();
        if !stray.is_empty() {
            return Err(Error::InputMismatch(stray));
        }
        let mut rules = self.rules.clone();
        rules.extend(actual.iter().map(|&a| Rule::fact(a)));
        Ok(Module {
            rules: normalize_rules(rules),
            input: AtomSet::new(),
            output: self.visible(),
            hidden: self.hidden.clone(),
        })
    }

    /// `⟨R, I, O ∪ A, H \ A⟩` for `A ⊆ H`.
    pub fn reveal(&self, atoms: &AtomSet) -> Result<Module> {
        let stray: AtomSet = atoms.difference(&self.hidden).copied().collect();
        if !stray.is_empty() {
            return Err(Error::Signature(format!(
                "cannot reveal non-hidden atoms {}",
                format_set(&stray)
            )));
        }
        Ok(Module {
            rules: self.rules.clone(),
            input: self.input.clone(),
            output: self.output.union(atoms).copied().collect(),
            hidden: self.hidden.difference(atoms).copied().collect(),
        })
    }

    pub(crate) fn from_parts(rules: Vec<Rule>, input: AtomSet, output: AtomSet, hidden: AtomSet) -> Module {
        Module {
            rules,
            input,
            output,
            hidden,
        }
    }

    pub fn into_parts(self) -> (Vec<Rule>, AtomSet, AtomSet, AtomSet) {
        (self.rules, self.input, self.output, self.hidden)
    }
}

/// Checks the well-formedness conditions of a module.
pub fn validate_module(m: &Module) -> std::result::Result<(), Vec<Violation>> {
    let v = m.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Convenience for building modules from atom names in examples and tests.
pub fn set(names: &[&str]) -> AtomSet {
    names.iter().map(|n| Atom::named(n)).collect()
}
