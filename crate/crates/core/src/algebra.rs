//! Composition, join and natural join of modules, plus executable checks of
//! the module theorem and of semantical joins.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::atom::{Atom, AtomSet};
use crate::error::{CompositionError, Result};
use crate::graphs::{dep_graph, sccs, DepMode};
use crate::interpretation::{Interpretation, ModelSet};
use crate::module::{normalize_rules, Module};
use crate::semantics::{stable_models, Compiled, Limits, Strategy};

fn check_composable(m1: &Module, m2: &Module) -> std::result::Result<(), CompositionError> {
    let clash: AtomSet = m1.output().intersection(m2.output()).copied().collect();
    if !clash.is_empty() {
        return Err(CompositionError::OutputClash(clash));
    }
    let (hb1, hb2) = (m1.atoms(), m2.atoms());
    let mut leak: AtomSet = m1.hidden().intersection(&hb2).copied().collect();
    leak.extend(m2.hidden().intersection(&hb1));
    if !leak.is_empty() {
        return Err(CompositionError::HiddenLeak(leak));
    }
    Ok(())
}

/// `P1 ⊕ P2 = ⟨R1 ∪ R2, (I1\O2) ∪ (I2\O1), O1 ∪ O2, H1 ∪ H2⟩`.
pub fn compose(m1: &Module, m2: &Module) -> Result<Module> {
    check_composable(m1, m2)?;
    let mut rules = m1.rules().to_vec();
    rules.extend_from_slice(m2.rules());
    let mut input: AtomSet = m1.input().difference(m2.output()).copied().collect();
    input.extend(m2.input().difference(m1.output()));
    Ok(Module::from_parts(
        normalize_rules(rules),
        input,
        m1.output().union(m2.output()).copied().collect(),
        m1.hidden().union(m2.hidden()).copied().collect(),
    ))
}

/// `P1 ⊔ P2`: composition without positive recursion between the modules.
pub fn join(m1: &Module, m2: &Module) -> Result<Module> {
    join_all([m1, m2])
}

/// The join of a collection of modules.
///
/// Equivalent to folding [`join`] from the left, but decided in one pass over
/// the union: outputs must be pairwise disjoint, hidden atoms respected, and
/// no SCC of the combined positive dependency graph may hold outputs of two
/// different modules.
pub fn join_all<'a>(modules: impl IntoIterator<Item = &'a Module>) -> Result<Module> {
    let modules: Vec<&Module> = modules.into_iter().collect();
    let mut owner: HashMap<Atom, usize> = HashMap::new();
    let mut clash = AtomSet::new();
    for (k, m) in modules.iter().enumerate() {
        for &a in m.output() {
            if owner.insert(a, k).is_some() {
                clash.insert(a);
            }
        }
    }
    if !clash.is_empty() {
        return Err(CompositionError::OutputClash(clash).into());
    }
    let mut hidden_owner: HashMap<Atom, usize> = HashMap::new();
    for (k, m) in modules.iter().enumerate() {
        for &h in m.hidden() {
            if hidden_owner.insert(h, k).is_some() {
                clash.insert(h);
            }
        }
    }
    for (k, m) in modules.iter().enumerate() {
        for a in m.input().iter().chain(m.output()) {
            if hidden_owner.contains_key(a) {
                clash.insert(*a);
            }
        }
        for r in m.rules() {
            for a in r.atoms() {
                if hidden_owner.get(&a).is_some_and(|&o| o != k) {
                    clash.insert(a);
                }
            }
        }
    }
    if !clash.is_empty() {
        return Err(CompositionError::HiddenLeak(clash).into());
    }

    let total: usize = modules.iter().map(|m| m.rules().len()).sum();
    let mut rules = Vec::with_capacity(total);
    let (mut input, mut output, mut hidden) = (AtomSet::new(), AtomSet::new(), AtomSet::new());
    for m in &modules {
        rules.extend_from_slice(m.rules());
        input.extend(m.input());
        output.extend(m.output());
        hidden.extend(m.hidden());
    }
    let input: AtomSet = input.difference(&output).copied().collect();
    let joined = Module::from_parts(normalize_rules(rules), input, output, hidden);

    if modules.len() > 1 {
        let g = dep_graph(&joined, DepMode::Positive);
        for s in sccs(&g).components.into_iter().filter(|s| s.len() > 1) {
            let mut owners = s.iter().filter_map(|a| owner.get(a));
            if let Some(first) = owners.next() {
                if owners.any(|o| o != first) {
                    return Err(CompositionError::MutualDependence(s).into());
                }
            }
        }
    }
    Ok(joined)
}

/// `M1 ∩ Hbv(P2) = M2 ∩ Hbv(P1)`.
pub fn compatible(m1_int: &Interpretation, m2_int: &Interpretation, m1: &Module, m2: &Module) -> bool {
    m1_int.restrict(&m2.visible()) == m2_int.restrict(&m1.visible())
}

/// `A1 ⋈ A2 = {M1 ∪ M2 | M1 ∈ A1, M2 ∈ A2 compatible}`.
pub fn natural_join(a1: &ModelSet, a2: &ModelSet, m1: &Module, m2: &Module) -> ModelSet {
    join_sets(a1, &m1.visible(), a2, &m2.visible())
}

fn join_sets(a1: &ModelSet, vis1: &AtomSet, a2: &ModelSet, vis2: &AtomSet) -> ModelSet {
    let mut buckets: BTreeMap<Interpretation, Vec<&Interpretation>> = BTreeMap::new();
    for m2 in a2 {
        buckets.entry(m2.restrict(vis1)).or_default().push(m2);
    }
    let mut out = ModelSet::new();
    for m1 in a1 {
        if let Some(partners) = buckets.get(&m1.restrict(vis2)) {
            for m2 in partners {
                out.insert(m1.union(m2));
            }
        }
    }
    out
}

/// The natural join of several model sets, each paired with its module.
pub fn natural_join_all(parts: &[(ModelSet, &Module)]) -> ModelSet {
    let Some(((first, m0), rest)) = parts.split_first() else {
        return [Interpretation::default()].into_iter().collect();
    };
    let mut acc = first.clone();
    let mut vis = m0.visible();
    for (set, m) in rest {
        let v = m.visible();
        acc = join_sets(&acc, &vis, set, &v);
        vis.extend(v);
    }
    acc
}

/// Both sides of the module theorem for a joinable collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    /// `SM(P1 ⊔ ... ⊔ Pn)`.
    pub joined: ModelSet,
    /// `SM(P1) ⋈ ... ⋈ SM(Pn)`.
    pub natural: ModelSet,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.joined == self.natural
    }

    /// Models of the join missing from the natural join.
    pub fn only_in_join(&self) -> ModelSet {
        self.joined.difference(&self.natural).cloned().collect()
    }

    pub fn only_in_natural_join(&self) -> ModelSet {
        self.natural.difference(&self.joined).cloned().collect()
    }
}

pub fn check_module_theorem(m1: &Module, m2: &Module, limits: &Limits) -> Result<TheoremReport> {
    check_module_theorem_all(&[m1.clone(), m2.clone()], limits)
}

pub fn check_module_theorem_all(modules: &[Module], limits: &Limits) -> Result<TheoremReport> {
    let joined_module = join_all(modules)?;
    let joined = stable_models(&joined_module, Strategy::BruteForce, limits)?;
    let parts = modules
        .iter()
        .map(|m| Ok((stable_models(m, Strategy::BruteForce, limits)?, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoremReport {
        joined,
        natural: natural_join_all(&parts),
    })
}

/// Why `SM(P1 ⊕ P2) ≠ SM(P1) ⋈ SM(P2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticalJoinWitness {
    /// `M ∈ SM(P1 ⊕ P2)` but `M ∩ Hb(P1) ∉ SM(P1)`.
    NotStableInFirst(Interpretation),
    /// `M ∈ SM(P1 ⊕ P2)` but `M ∩ Hb(P2) ∉ SM(P2)`.
    NotStableInSecond(Interpretation),
    /// Both projections are stable but `M ∉ SM(P1 ⊕ P2)`.
    LostInComposition(Interpretation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticalJoinReport {
    pub composition: Module,
    /// The first witness in enumeration order, if any.
    pub witness: Option<SemanticalJoinWitness>,
}

impl SemanticalJoinReport {
    /// The semantical join `P1 ⊕ P2` is defined.
    pub fn defined(&self) -> bool {
        self.witness.is_none()
    }
}

fn projection_table(from: &Compiled, to: &Compiled) -> Vec<u64> {
    from.atoms().iter().map(|&a| to.bit_of(a).unwrap_or(0)).collect()
}

fn project(mask: u64, table: &[u64]) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= table[i];
    }
    out
}

/// Decides whether `SM(P1 ⊕ P2) = SM(P1) ⋈ SM(P2)` by searching every
/// `M ⊆ Hb(P1 ⊕ P2)` for a witness of inequality.
pub fn check_semantical_join(m1: &Module, m2: &Module, limits: &Limits) -> Result<SemanticalJoinReport> {
    let composition = compose(m1, m2)?;
    limits.check("semantical join check", composition.atoms().len())?;
    let (c, c1, c2) = (Compiled::new(&composition), Compiled::new(m1), Compiled::new(m2));
    let (t1, t2) = (projection_table(&c, &c1), projection_table(&c, &c2));
    let classify = |m: u64| -> Option<u8> {
        let in_p = c.is_stable(m);
        let in_1 = c1.is_stable(project(m, &t1));
        let in_2 = c2.is_stable(project(m, &t2));
        match (in_p, in_1, in_2) {
            (true, false, _) => Some(0),
            (true, true, false) => Some(1),
            (false, true, true) => Some(2),
            _ => None,
        }
    };
    let found = (0..1u64 << c.len())
        .into_par_iter()
        .find_map_first(|m| classify(m).map(|k| (m, k)));
    let witness = found.map(|(m, kind)| {
        let i = c.interpretation(m);
        match kind {
            0 => SemanticalJoinWitness::NotStableInFirst(i),
            1 => SemanticalJoinWitness::NotStableInSecond(i),
            _ => SemanticalJoinWitness::LostInComposition(i),
        }
    });
    Ok(SemanticalJoinReport { composition, witness })
}
