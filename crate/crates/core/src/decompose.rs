//! Decomposition of a module into submodules induced by strongly connected
//! components, and recomposition by join.

use std::collections::HashMap;

use crate::algebra::join_all;
use crate::atom::{format_set, Atom, AtomSet};
use crate::error::{Error, Result};
use crate::graphs::{canonical_topo_order, dep_graph, dep_h, sccs, DepMode};
use crate::module::{normalize_rules, Module};
use crate::rule::{self, ChoiceRule, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// SCCs of the positive dependency graph.
    Pos,
    /// Positive SCCs closed under hidden-atom dependencies.
    PosHidden,
    /// SCCs of the positive and negative dependency graph, closed under
    /// hidden-atom dependencies.
    PosNegHidden,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Pos, Mode::PosHidden, Mode::PosNegHidden];

    fn graph_mode(self) -> DepMode {
        match self {
            Mode::Pos | Mode::PosHidden => DepMode::Positive,
            Mode::PosNegHidden => DepMode::PositiveNegative,
        }
    }

    fn hidden_closure(self) -> bool {
        self != Mode::Pos
    }
}

/// The part of `r` defining atoms of `d`, if any. Choice rules are projected
/// onto `d`.
fn defining_part(r: &Rule, d: impl Fn(&Atom) -> bool) -> Option<Rule> {
    match r {
        Rule::Weight(w) => d(&w.head).then(|| r.clone()),
        Rule::Choice(c) => ChoiceRule::new(
            c.heads.iter().copied().filter(|a| d(a)),
            c.pos.iter().copied(),
            c.neg.iter().copied(),
        )
        .map(Rule::Choice),
    }
}

fn check_no_input(m: &Module, d: &AtomSet) -> Result<()> {
    let bad: AtomSet = d.intersection(m.input()).copied().collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Signature(format!("{} are input atoms", format_set(&bad))))
    }
}

/// `R[D]`: weight rules with heads in `D` and choice rules projected to `D`.
pub fn rules_defining(m: &Module, d: &AtomSet) -> Result<Vec<Rule>> {
    check_no_input(m, d)?;
    Ok(normalize_rules(
        m.rules()
            .iter()
            .filter_map(|r| defining_part(r, |a| d.contains(a)))
            .collect(),
    ))
}

fn submodule(m: &Module, rules: Vec<Rule>, d: &AtomSet) -> Module {
    let input: AtomSet = rule::rule_atoms(&rules)
        .into_iter()
        .filter(|a| !d.contains(a) && !m.hidden().contains(a))
        .collect();
    Module::from_parts(
        rules,
        input,
        d.iter().filter(|a| m.output().contains(a)).copied().collect(),
        d.iter().filter(|a| m.hidden().contains(a)).copied().collect(),
    )
}

/// `P[D] = ⟨R[D], (Hb(R[D]) \ D) ∩ (I ∪ O), D ∩ O, D ∩ H⟩`.
pub fn induced_submodule(m: &Module, d: &AtomSet) -> Result<Module> {
    let rules = rules_defining(m, d)?;
    Ok(submodule(m, rules, d))
}

/// Submodules in topological order, with `P0` first when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub modules: Vec<Module>,
    pub warnings: Vec<String>,
}

/// `P0 = ⟨∅, I \ Hb(R), ∅, ∅⟩`, extended with declared output and hidden
/// atoms that occur in no rule.
pub fn residual_module(m: &Module) -> Module {
    let used = m.rule_atoms();
    let unused = |s: &AtomSet| -> AtomSet { s.difference(&used).copied().collect() };
    Module::from_parts(Vec::new(), unused(m.input()), unused(m.output()), unused(m.hidden()))
}

/// Splits `m` into submodules whose join is `m` (up to choice-rule
/// splitting) in the hidden-closed modes.
pub fn decompose(m: &Module, mode: Mode) -> Decomposition {
    let mut warnings = Vec::new();
    if mode == Mode::Pos && !m.hidden().is_empty() {
        warnings.push(format!(
            "mode pos ignores hidden atoms {}; the submodules may not be joinable",
            format_set(m.hidden())
        ));
    }
    let used = m.rule_atoms();
    let graph = dep_graph(m, mode.graph_mode());
    let components: Vec<AtomSet> = sccs(&graph)
        .components
        .into_iter()
        .filter(|c| c.iter().all(|a| !m.input().contains(a) && used.contains(a)))
        .collect();
    let groups: Vec<Vec<usize>> = if mode.hidden_closure() {
        dep_h(m, &components)
    } else {
        (0..components.len()).map(|i| vec![i]).collect()
    };
    let mut group_of: HashMap<Atom, usize> = HashMap::new();
    let mut group_atoms: Vec<AtomSet> = Vec::with_capacity(groups.len());
    for (g, members) in groups.iter().enumerate() {
        let mut atoms = AtomSet::new();
        for &c in members {
            for &a in &components[c] {
                group_of.insert(a, g);
                atoms.insert(a);
            }
        }
        group_atoms.push(atoms);
    }

    let mut buckets: Vec<Vec<Rule>> = vec![Vec::new(); groups.len()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for r in m.rules() {
        let mut targets: Vec<usize> = r.heads().iter().filter_map(|h| group_of.get(h).copied()).collect();
        targets.sort_unstable();
        targets.dedup();
        for &g in &targets {
            if let Some(part) = defining_part(r, |a| group_of.get(a) == Some(&g)) {
                buckets[g].push(part);
            }
            for b in r.body_atoms() {
                if let Some(&src) = group_of.get(&b) {
                    if src != g {
                        edges.push((src, g));
                    }
                }
            }
        }
    }
    let order = canonical_topo_order(groups.len(), &edges, |g| {
        group_atoms[g].iter().next().map_or(usize::MAX, |a| a.id() as usize)
    });

    let mut modules = Vec::with_capacity(groups.len() + 1);
    let p0 = residual_module(m);
    if !p0.is_empty() {
        modules.push(p0);
    }
    let mut buckets: Vec<Option<Vec<Rule>>> = buckets.into_iter().map(Some).collect();
    for g in order {
        let rules = normalize_rules(buckets[g].take().unwrap_or_default());
        modules.push(submodule(m, rules, &group_atoms[g]));
    }
    Decomposition { modules, warnings }
}

/// The join of the submodules.
pub fn recompose(modules: &[Module]) -> Result<Module> {
    join_all(modules)
}

/// `R` with every choice rule split into one rule per head atom. Two
/// modules with equal normalized rules agree up to choice-rule splitting.
pub fn split_choice_rules(rules: &[Rule]) -> Vec<Rule> {
    let mut out = Vec::with_capacity(rules.len());
    for r in rules {
        match r {
            Rule::Choice(c) if c.heads.len() > 1 => {
                for &h in &c.heads {
                    out.push(Rule::choice([h], c.pos.iter().copied(), c.neg.iter().copied()));
                }
            }
            _ => out.push(r.clone()),
        }
    }
    normalize_rules(out)
}
