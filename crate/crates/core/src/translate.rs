//! Translation of smodels modules into normal modules.

use std::collections::BTreeMap;

use crate::algebra::join;
use crate::atom::{format_set, Atom, AtomSet};
use crate::equivalence::{modular_eq, Method};
use crate::error::{Error, Result};
use crate::interpretation::Interpretation;
use crate::module::{normalize_rules, Module};
use crate::rule::{Rule, WeightRule};
use crate::semantics::{stable_models, Limits, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Keep only subset-minimal satisfying literal sets of weight rules.
    pub minimal: bool,
    /// Upper bound on the number of produced rules.
    pub max_rules: usize,
    /// Upper bound on the number of body literals of one expanded weight rule.
    pub max_body: usize,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            minimal: false,
            max_rules: 1 << 20,
            max_body: 24,
        }
    }
}

fn expand_weight_rule(r: &WeightRule, opts: &TranslateOptions) -> Result<Vec<Rule>> {
    if r.is_basic() {
        return Ok(vec![Rule::Weight(r.clone())]);
    }
    let lits: Vec<(Atom, u64, bool)> = r
        .pos
        .iter()
        .map(|l| (l.atom, l.weight, true))
        .chain(r.neg.iter().map(|l| (l.atom, l.weight, false)))
        .collect();
    let n = lits.len();
    if n > opts.max_body {
        return Err(Error::cap(
            format!("expansion of the weight rule with head {}", r.head),
            n,
            opts.max_body,
        ));
    }
    let weight = |mask: u64| -> u64 { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| lits[i].1).sum() };
    let mut chosen: Vec<u64> = (0..1u64 << n).filter(|&m| weight(m) >= r.bound).collect();
    if opts.minimal {
        let all = chosen.clone();
        chosen.retain(|&m| !all.iter().any(|&o| o != m && o & m == o));
    }
    if chosen.len() > opts.max_rules {
        return Err(Error::cap(
            format!("rules produced for the weight rule with head {}", r.head),
            chosen.len(),
            opts.max_rules,
        ));
    }
    Ok(chosen
        .into_iter()
        .map(|mask| {
            let lits = &lits;
            let pick = |pos: bool| {
                (0..n)
                    .filter(|&i| mask >> i & 1 == 1 && lits[i].2 == pos)
                    .map(|i| lits[i].0)
                    .collect::<Vec<_>>()
            };
            Rule::basic(r.head, pick(true), pick(false))
        })
        .collect())
}

/// `Tr_NLP(P) = ⟨R', I, O, H ∪ {ā | a ∈ choiceheads(R)}⟩`.
///
/// Choice rules `{A} ← B, not C` become `a ← B, not C, not ā` and `ā ← not a`;
/// weight rules become one basic rule per satisfying choice of body literals.
pub fn tr_nlp(m: &Module, opts: &TranslateOptions) -> Result<Module> {
    let hb = m.atoms();
    let bars: BTreeMap<Atom, Atom> = m.choice_heads().into_iter().map(|a| (a, a.bar())).collect();
    let clash: AtomSet = bars.values().filter(|b| hb.contains(b)).copied().collect();
    if !clash.is_empty() {
        return Err(Error::NameCollision(format!(
            "complement atoms {} already occur",
            format_set(&clash)
        )));
    }
    let mut rules = Vec::new();
    for r in m.rules() {
        match r {
            Rule::Weight(w) => rules.extend(expand_weight_rule(w, opts)?),
            Rule::Choice(c) => {
                for &a in &c.heads {
                    let bar = bars[&a];
                    rules.push(Rule::basic(
                        a,
                        c.pos.iter().copied(),
                        c.neg.iter().copied().chain([bar]),
                    ));
                    rules.push(Rule::basic(bar, [], [a]));
                }
            }
        }
        if rules.len() > opts.max_rules {
            return Err(Error::cap(
                "rules produced by the translation",
                rules.len(),
                opts.max_rules,
            ));
        }
    }
    let mut hidden = m.hidden().clone();
    hidden.extend(bars.values());
    Ok(Module::from_parts(
        normalize_rules(rules),
        m.input().clone(),
        m.output().clone(),
        hidden,
    ))
}

/// `f(M) = M ∪ {ā | a ∈ choiceheads(P) \ M}`: the stable model of the
/// translation corresponding to `M`.
pub fn lift_interpretation(m: &Module, model: &Interpretation) -> Interpretation {
    let mut out = model.clone();
    out.0.extend(
        m.choice_heads()
            .into_iter()
            .filter(|a| !model.contains(*a))
            .map(Atom::bar),
    );
    out
}

/// Checks that `N ↦ N ∩ Hb(P)` is a bijection `SM(Tr(P)) → SM(P)` and that
/// `ā ∈ N` iff `a ∉ N` for every choice head `a`.
pub fn check_strong_faithfulness(m: &Module, opts: &TranslateOptions, limits: &Limits) -> Result<bool> {
    let tr = tr_nlp(m, opts)?;
    let source = stable_models(m, Strategy::BruteForce, limits)?;
    let target = stable_models(&tr, Strategy::BruteForce, limits)?;
    let hb = m.atoms();
    let projected: Vec<Interpretation> = target.iter().map(|n| n.restrict(&hb)).collect();
    let injective = projected.iter().collect::<std::collections::BTreeSet<_>>().len() == projected.len();
    let onto = projected.iter().cloned().collect::<std::collections::BTreeSet<_>>() == source;
    let complements = target
        .iter()
        .all(|n| m.choice_heads().iter().all(|&a| n.contains(a.bar()) != n.contains(a)));
    Ok(injective && onto && complements)
}

/// Outcome of checking the three translation conditions on a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationReport {
    /// `reveal(P, Hbh(P)) ≡m reveal(Tr(P), Hbh(P))` for both modules and
    /// their join.
    pub faithful: bool,
    /// `Tr(P) ⊔ Tr(Q)` is defined.
    pub preserves_join: bool,
    /// `Tr(P) ⊔ Tr(Q) = Tr(P ⊔ Q)`.
    pub modular: bool,
}

impl TranslationReport {
    pub fn holds(&self) -> bool {
        self.faithful && self.preserves_join && self.modular
    }
}

fn revealed_faithful(m: &Module, opts: &TranslateOptions, limits: &Limits) -> Result<bool> {
    let tr = tr_nlp(m, opts)?;
    let hidden = m.hidden().clone();
    modular_eq(&m.reveal(&hidden)?, &tr.reveal(&hidden)?, Method::Direct, limits)
}

/// Checks the translation conditions for a joinable pair `m1 ⊔ m2`.
pub fn check_translation_conditions(
    m1: &Module,
    m2: &Module,
    opts: &TranslateOptions,
    limits: &Limits,
) -> Result<TranslationReport> {
    let joined = join(m1, m2)?;
    let faithful = revealed_faithful(m1, opts, limits)?
        && revealed_faithful(m2, opts, limits)?
        && revealed_faithful(&joined, opts, limits)?;
    let (t1, t2) = (tr_nlp(m1, opts)?, tr_nlp(m2, opts)?);
    let tr_join = join(&t1, &t2);
    let preserves_join = tr_join.is_ok();
    let modular = match tr_join {
        Ok(j) => j == tr_nlp(&joined, opts)?,
        Err(_) => false,
    };
    Ok(TranslationReport {
        faithful,
        preserves_join,
        modular,
    })
}
