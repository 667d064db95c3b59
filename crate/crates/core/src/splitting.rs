//! Splitting sets of normal programs: bottom, top, partial evaluation and
//! solutions.

use crate::atom::{format_set, AtomSet};
use crate::error::{Error, Result};
use crate::interpretation::{Interpretation, ModelSet};
use crate::module::Module;
use crate::rule::Rule;
use crate::semantics::{stable_models, Limits, Strategy};

/// `U` is a splitting set: every rule with its head in `U` only mentions
/// atoms of `U`.
pub fn is_splitting_set(rules: &[Rule], u: &AtomSet) -> bool {
    rules
        .iter()
        .filter(|r| r.heads().iter().any(|h| u.contains(h)))
        .all(|r| r.atoms().all(|a| u.contains(&a)))
}

/// A normal program split by `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub splitting_set: AtomSet,
    /// `b_U(P)`: rules whose atoms all lie in `U`.
    pub bottom: Vec<Rule>,
    /// `t_U(P) = P \ b_U(P)`.
    pub top: Vec<Rule>,
    atoms: AtomSet,
}

/// Splits a normal module without input atoms along `u`.
pub fn split(m: &Module, u: &AtomSet) -> Result<Split> {
    if let Some(r) = m.rules().iter().find(|r| !r.is_basic()) {
        return Err(Error::NonNormalRule(format!("{r:?}")));
    }
    if !m.input().is_empty() {
        return Err(Error::NonGroundInput);
    }
    let atoms = m.atoms();
    let stray: AtomSet = u.difference(&atoms).copied().collect();
    if !stray.is_empty() {
        return Err(Error::NotSplittingSet(format!("{} not in Hb(P)", format_set(&stray))));
    }
    if !is_splitting_set(m.rules(), u) {
        return Err(Error::NotSplittingSet(format_set(u)));
    }
    let (bottom, top) = m
        .rules()
        .iter()
        .cloned()
        .partition(|r| r.atoms().all(|a| u.contains(&a)));
    Ok(Split {
        splitting_set: u.clone(),
        bottom,
        top,
        atoms,
    })
}

impl Split {
    /// `e_U(t_U(P), X)`.
    pub fn partial_eval(&self, x: &Interpretation) -> Vec<Rule> {
        let u = &self.splitting_set;
        let mut out: Vec<Rule> = self
            .top
            .iter()
            .filter(|r| {
                r.pos_atoms().filter(|a| u.contains(a)).all(|a| x.contains(a))
                    && r.neg_atoms().filter(|a| u.contains(a)).all(|a| !x.contains(a))
            })
            .map(|r| {
                Rule::basic(
                    r.heads()[0],
                    r.pos_atoms().filter(|a| !u.contains(a)).collect::<Vec<_>>(),
                    r.neg_atoms().filter(|a| !u.contains(a)).collect::<Vec<_>>(),
                )
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn bottom_module(&self) -> Module {
        Module::new_unchecked(
            self.bottom.iter().cloned(),
            AtomSet::new(),
            self.splitting_set.clone(),
            AtomSet::new(),
        )
    }

    fn top_module(&self, x: &Interpretation) -> Module {
        let rest: AtomSet = self.atoms.difference(&self.splitting_set).copied().collect();
        Module::new_unchecked(self.partial_eval(x), AtomSet::new(), rest, AtomSet::new())
    }

    /// `⟨X, Y⟩` is a solution with respect to `U`.
    pub fn is_solution(&self, x: &Interpretation, y: &Interpretation) -> bool {
        let u = &self.splitting_set;
        x.is_subset(u)
            && y.atoms().iter().all(|a| self.atoms.contains(a) && !u.contains(a))
            && crate::semantics::is_stable(&self.bottom_module(), x)
            && crate::semantics::is_stable(&self.top_module(x), y)
    }

    /// All solutions, ordered by `X` then `Y`.
    pub fn solutions(&self, limits: &Limits) -> Result<Vec<(Interpretation, Interpretation)>> {
        let mut out = Vec::new();
        for x in stable_models(&self.bottom_module(), Strategy::BruteForce, limits)? {
            for y in stable_models(&self.top_module(&x), Strategy::BruteForce, limits)? {
                out.push((x.clone(), y));
            }
        }
        Ok(out)
    }

    /// `{X ∪ Y | ⟨X, Y⟩ solution}`.
    pub fn models_from_solutions(&self, limits: &Limits) -> Result<ModelSet> {
        Ok(self.solutions(limits)?.into_iter().map(|(x, y)| x.union(&y)).collect())
    }
}
