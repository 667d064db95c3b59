//! Interpretations and sets of interpretations.

use std::collections::BTreeSet;
use std::fmt;

use crate::atom::{format_set, Atom, AtomSet};

/// A finite set of true atoms.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation(pub AtomSet);

/// A finite set of interpretations.
pub type ModelSet = BTreeSet<Interpretation>;

impl Interpretation {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Interpretation(atoms.into_iter().collect())
    }

    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Interpretation(names.into_iter().map(Atom::named).collect())
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.0.contains(&a)
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `M ∩ S`.
    pub fn restrict(&self, set: &AtomSet) -> Interpretation {
        Interpretation(self.0.intersection(set).copied().collect())
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        Interpretation(self.0.union(&other.0).copied().collect())
    }

    pub fn is_subset(&self, set: &AtomSet) -> bool {
        self.0.is_subset(set)
    }
}

impl From<AtomSet> for Interpretation {
    fn from(s: AtomSet) -> Self {
        Interpretation(s)
    }
}

impl FromIterator<Atom> for Interpretation {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_set(&self.0))
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Builds a model set from lists of atom names.
pub fn model_set(models: &[&[&str]]) -> ModelSet {
    models
        .iter()
        .map(|m| Interpretation::from_names(m.iter().copied()))
        .collect()
}
