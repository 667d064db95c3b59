//! Propositional atoms.
//!
//! Atoms are interned process-wide: every occurrence of the same name maps to
//! the same [`Atom`], so modules read from different documents compose by
//! plain set union. Machine-generated atoms (the integrity-constraint atom,
//! atoms missing from a numeric symbol table, `_h<k>` placeholders) are
//! *nameless*; each one is distinct from every other atom ever created.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::num::NonZeroU32;
use std::sync::{Arc, OnceLock, RwLock};

/// An interned propositional atom. Two atoms are equal iff their ids are.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(NonZeroU32);

/// A finite set of atoms, ordered by id.
pub type AtomSet = BTreeSet<Atom>;

/// Prefix of the complement atoms introduced when translating choice rules.
pub const BAR_PREFIX: &str = "__not_";

#[derive(Default)]
struct Interner {
    by_name: HashMap<Arc<str>, Atom>,
    names: Vec<Option<Arc<str>>>,
    bars: HashMap<Atom, Atom>,
}

impl Interner {
    fn push(&mut self, name: Option<Arc<str>>) -> Atom {
        self.names.push(name);
        let id = u32::try_from(self.names.len()).expect("atom id space exhausted");
        Atom(NonZeroU32::new(id).unwrap())
    }
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

impl Atom {
    /// Returns the atom named `name`, creating it on first use.
    pub fn named(name: &str) -> Atom {
        if let Some(a) = interner().read().unwrap().by_name.get(name) {
            return *a;
        }
        let mut table = interner().write().unwrap();
        if let Some(a) = table.by_name.get(name) {
            return *a;
        }
        let name: Arc<str> = Arc::from(name);
        let atom = table.push(Some(name.clone()));
        table.by_name.insert(name, atom);
        atom
    }

    /// Allocates a new nameless atom, distinct from all existing atoms.
    pub fn fresh() -> Atom {
        interner().write().unwrap().push(None)
    }

    /// Allocates `n` nameless atoms with increasing ids.
    pub fn fresh_many(n: usize) -> Vec<Atom> {
        let mut table = interner().write().unwrap();
        (0..n).map(|_| table.push(None)).collect()
    }

    pub fn id(self) -> u32 {
        self.0.get()
    }

    pub fn name(self) -> Option<Arc<str>> {
        interner().read().unwrap().names[self.0.get() as usize - 1].clone()
    }

    pub fn is_nameless(self) -> bool {
        self.name().is_none()
    }

    /// The complement atom `ā` used by the normal-program translation.
    ///
    /// Named atoms map to `__not_<name>`; nameless atoms map to a nameless
    /// atom that is allocated once and reused afterwards, so translating the
    /// same module twice yields syntactically equal results.
    pub fn bar(self) -> Atom {
        match self.name() {
            Some(name) => Atom::named(&format!("{BAR_PREFIX}{name}")),
            None => {
                if let Some(b) = interner().read().unwrap().bars.get(&self) {
                    return *b;
                }
                let mut table = interner().write().unwrap();
                if let Some(b) = table.bars.get(&self) {
                    return *b;
                }
                let b = table.push(None);
                table.bars.insert(self, b);
                b
            }
        }
    }

    /// Ordering used for all printed output: named atoms by name, then
    /// nameless atoms by id.
    pub fn display_cmp(self, other: Atom) -> Ordering {
        match (self.name(), other.name()) {
            (Some(a), Some(b)) => a.cmp(&b).then(self.id().cmp(&other.id())),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.id().cmp(&other.id()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(name) => f.write_str(&name),
            None => write!(f, "_h#{}", self.id()),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Builds an atom set from names. Handy in tests and examples.
pub fn atoms<'a>(names: impl IntoIterator<Item = &'a str>) -> AtomSet {
    names.into_iter().map(Atom::named).collect()
}

/// Sorts atoms for printing.
pub fn sorted_for_display(set: impl IntoIterator<Item = Atom>) -> Vec<Atom> {
    let mut v: Vec<Atom> = set.into_iter().collect();
    v.sort_by(|a, b| a.display_cmp(*b));
    v
}

/// Formats an atom set as `{a,b,c}` in display order.
pub fn format_set(set: &AtomSet) -> String {
    let parts: Vec<String> = sorted_for_display(set.iter().copied())
        .into_iter()
        .map(|a| a.to_string())
        .collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Atom::named("atom_test_a");
        assert_eq!(a, Atom::named("atom_test_a"));
        assert_ne!(a, Atom::named("atom_test_b"));
        assert_eq!(a.name().as_deref(), Some("atom_test_a"));
        assert!(a.id() >= 1);
    }

    #[test]
    fn fresh_atoms_are_distinct_and_nameless() {
        let x = Atom::fresh();
        let y = Atom::fresh();
        assert_ne!(x, y);
        assert!(x.is_nameless());
        assert!(x < y);
    }

    #[test]
    fn bar_is_memoized() {
        let a = Atom::named("atom_test_choice");
        assert_eq!(a.bar().name().as_deref(), Some("__not_atom_test_choice"));
        let h = Atom::fresh();
        assert_eq!(h.bar(), h.bar());
        assert!(h.bar().is_nameless());
        assert_ne!(h.bar(), h);
    }

    #[test]
    fn display_order_puts_nameless_last() {
        let h = Atom::fresh();
        let b = Atom::named("b");
        let a = Atom::named("a");
        assert_eq!(sorted_for_display([h, b, a]), vec![a, b, h]);
        assert_eq!(format_set(&[a, b].into_iter().collect()), "{a,b}");
    }
}
