//! Clark completion, loop formulas and the Lin–Zhao characterization of
//! stable models.

use std::fmt;

use crate::atom::{sorted_for_display, Atom, AtomSet};
use crate::error::{Error, Result};
use crate::graphs::loops;
use crate::interpretation::Interpretation;
use crate::module::Module;
use crate::rule::Rule;
use crate::translate::{lift_interpretation, tr_nlp, TranslateOptions};

/// A propositional formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropFormula {
    True,
    False,
    Atom(Atom),
    Not(Box<PropFormula>),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn negate(f: PropFormula) -> PropFormula {
        PropFormula::Not(Box::new(f))
    }

    /// Conjunction; the empty conjunction is ⊤ and a single conjunct stays
    /// as it is.
    pub fn and(mut fs: Vec<PropFormula>) -> PropFormula {
        match fs.len() {
            0 => PropFormula::True,
            1 => fs.pop().unwrap(),
            _ => PropFormula::And(fs),
        }
    }

    /// Disjunction; the empty disjunction is ⊥.
    pub fn or(mut fs: Vec<PropFormula>) -> PropFormula {
        match fs.len() {
            0 => PropFormula::False,
            1 => fs.pop().unwrap(),
            _ => PropFormula::Or(fs),
        }
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> PropFormula {
        PropFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: PropFormula, b: PropFormula) -> PropFormula {
        PropFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, m: &Interpretation) -> bool {
        match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Atom(a) => m.contains(*a),
            PropFormula::Not(f) => !f.eval(m),
            PropFormula::And(fs) => fs.iter().all(|f| f.eval(m)),
            PropFormula::Or(fs) => fs.iter().any(|f| f.eval(m)),
            PropFormula::Implies(a, b) => !a.eval(m) || b.eval(m),
            PropFormula::Iff(a, b) => a.eval(m) == b.eval(m),
        }
    }

    fn is_compound(&self) -> bool {
        matches!(
            self,
            PropFormula::And(_) | PropFormula::Or(_) | PropFormula::Implies(..) | PropFormula::Iff(..)
        )
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, p: &PropFormula) -> fmt::Result {
    if p.is_compound() {
        write!(f, "({p})")
    } else {
        write!(f, "{p}")
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, fs: &[PropFormula], op: &str) -> fmt::Result {
    for (i, p) in fs.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        write_operand(f, p)?;
    }
    Ok(())
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::True => f.write_str("⊤"),
            PropFormula::False => f.write_str("⊥"),
            PropFormula::Atom(a) => write!(f, "{a}"),
            PropFormula::Not(p) => {
                f.write_str("¬")?;
                write_operand(f, p)
            }
            PropFormula::And(fs) => write_joined(f, fs, "∧"),
            PropFormula::Or(fs) => write_joined(f, fs, "∨"),
            PropFormula::Implies(a, b) => {
                write_operand(f, a)?;
                f.write_str(" → ")?;
                write_operand(f, b)
            }
            PropFormula::Iff(a, b) => {
                write_operand(f, a)?;
                f.write_str(" ↔ ")?;
                write_operand(f, b)
            }
        }
    }
}

fn ensure_normal(m: &Module) -> Result<()> {
    match m.rules().iter().find(|r| !r.is_basic()) {
        Some(r) => Err(Error::NonNormalRule(format!("{r:?}"))),
        None => Ok(()),
    }
}

fn body_formula(r: &Rule) -> PropFormula {
    let lits = r
        .pos_atoms()
        .map(PropFormula::Atom)
        .chain(r.neg_atoms().map(|c| PropFormula::negate(PropFormula::Atom(c))))
        .collect();
    PropFormula::and(lits)
}

/// One equivalence `a ↔ ∨ bodies` per atom of `O ∪ H`, in display order.
pub fn completion_conjuncts(m: &Module) -> Result<Vec<PropFormula>> {
    ensure_normal(m)?;
    let defined: AtomSet = m.output().union(m.hidden()).copied().collect();
    Ok(sorted_for_display(defined)
        .into_iter()
        .map(|a| {
            let bodies = m
                .rules()
                .iter()
                .filter(|r| r.heads()[0] == a)
                .map(body_formula)
                .collect();
            PropFormula::iff(PropFormula::Atom(a), PropFormula::or(bodies))
        })
        .collect())
}

/// `Comp(P)` over the non-input atoms.
pub fn completion(m: &Module) -> Result<PropFormula> {
    Ok(PropFormula::and(completion_conjuncts(m)?))
}

/// `LF(L, P) = ¬(∨ EB(L, P) bodies) → ∧_{a ∈ L} ¬a` for every loop `L`.
pub fn loop_formulas(m: &Module, cap: usize) -> Result<Vec<(AtomSet, PropFormula)>> {
    ensure_normal(m)?;
    Ok(loops(m.rules(), cap)?
        .into_iter()
        .map(|l| {
            let external = m
                .rules()
                .iter()
                .filter(|r| l.contains(&r.heads()[0]) && r.pos_atoms().all(|b| !l.contains(&b)))
                .map(body_formula)
                .collect();
            let negated = sorted_for_display(l.iter().copied())
                .into_iter()
                .map(|a| PropFormula::negate(PropFormula::Atom(a)))
                .collect();
            let f = PropFormula::implies(
                PropFormula::negate(PropFormula::or(external)),
                PropFormula::and(negated),
            );
            (l, f)
        })
        .collect())
}

/// Completion plus loop formulas of a module, prepared for repeated checks.
pub struct LinZhao {
    source: Module,
    translated: bool,
    formulas: Vec<PropFormula>,
}

impl LinZhao {
    /// Non-normal modules are translated to normal ones first.
    pub fn new(m: &Module, loop_cap: usize) -> Result<LinZhao> {
        let (normal, translated) = if m.is_normal() {
            (m.clone(), false)
        } else {
            (tr_nlp(m, &TranslateOptions::default())?, true)
        };
        let mut formulas = completion_conjuncts(&normal)?;
        formulas.extend(loop_formulas(&normal, loop_cap)?.into_iter().map(|(_, f)| f));
        Ok(LinZhao {
            source: m.clone(),
            translated,
            formulas,
        })
    }

    pub fn formulas(&self) -> &[PropFormula] {
        &self.formulas
    }

    pub fn is_stable(&self, model: &Interpretation) -> bool {
        if !model.is_subset(&self.source.atoms()) {
            return false;
        }
        if self.translated {
            let lifted = lift_interpretation(&self.source, model);
            self.formulas.iter().all(|f| f.eval(&lifted))
        } else {
            self.formulas.iter().all(|f| f.eval(model))
        }
    }
}

/// `M ⊨ Comp(P) ∪ LF(P)`.
pub fn stable_by_lin_zhao(m: &Module, model: &Interpretation, loop_cap: usize) -> Result<bool> {
    Ok(LinZhao::new(m, loop_cap)?.is_stable(model))
}

/// `Comp(P) ∪ LF(P)` as text, one formula per line.
pub fn theory_text(m: &Module, loop_cap: usize) -> Result<String> {
    let mut out = String::new();
    for f in completion_conjuncts(m)? {
        out.push_str(&f.to_string());
        out.push('\n');
    }
    for (_, f) in loop_formulas(m, loop_cap)? {
        out.push_str(&f.to_string());
        out.push('\n');
    }
    Ok(out)
}
