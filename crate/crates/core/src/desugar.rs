//! Lowering of surface rule forms to weight and choice rules.

use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::rule::{ChoiceRule, Rule, WeightRule};

/// A rule body as written in a source file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceBody {
    /// `b1, ..., not c1, ...`
    Basic { pos: Vec<Atom>, neg: Vec<Atom> },
    /// `l {b1, ..., not c1, ...}`
    Cardinality { bound: i64, pos: Vec<Atom>, neg: Vec<Atom> },
    /// `w <= {b1=w1, ..., not c1=v1, ...}`
    Weight {
        bound: i64,
        pos: Vec<(Atom, i64)>,
        neg: Vec<(Atom, i64)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceRule {
    Rule {
        head: Atom,
        body: SurfaceBody,
    },
    Choice {
        heads: Vec<Atom>,
        pos: Vec<Atom>,
        neg: Vec<Atom>,
    },
    Integrity(SurfaceBody),
    Compute {
        pos: Vec<Atom>,
        neg: Vec<Atom>,
    },
    Minimize,
}

impl SurfaceBody {
    pub fn empty() -> Self {
        SurfaceBody::Basic {
            pos: Vec::new(),
            neg: Vec::new(),
        }
    }
}

fn non_negative(v: i64, what: &str) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Desugar(format!("negative {what} {v}")))
}

fn lower_body(head: Atom, body: &SurfaceBody) -> Result<WeightRule> {
    Ok(match body {
        SurfaceBody::Basic { pos, neg } => WeightRule::basic(head, pos.iter().copied(), neg.iter().copied()),
        SurfaceBody::Cardinality { bound, pos, neg } => {
            let bound = non_negative(*bound, "bound")?;
            let mut r = WeightRule::basic(head, pos.iter().copied(), neg.iter().copied());
            r.bound = bound;
            r
        }
        SurfaceBody::Weight { bound, pos, neg } => {
            let bound = non_negative(*bound, "bound")?;
            let pos = pos
                .iter()
                .map(|&(a, w)| Ok((a, non_negative(w, "weight")?)))
                .collect::<Result<Vec<_>>>()?;
            let neg = neg
                .iter()
                .map(|&(a, w)| Ok((a, non_negative(w, "weight")?)))
                .collect::<Result<Vec<_>>>()?;
            WeightRule::new(head, bound, pos, neg)
        }
    })
}

/// Desugars the rules of one program.
///
/// Integrity constraints share one hidden atom `f`, allocated on first use:
/// `← body` becomes `f ← body, not f`.
#[derive(Debug, Default)]
pub struct Desugarer {
    falsity: Option<Atom>,
}

impl Desugarer {
    pub fn new() -> Self {
        Self::default()
    }

    /// The integrity-constraint atom, if one was allocated.
    pub fn falsity(&self) -> Option<Atom> {
        self.falsity
    }

    fn falsity_atom(&mut self) -> Atom {
        *self.falsity.get_or_insert_with(Atom::fresh)
    }

    pub fn desugar(&mut self, rule: &SurfaceRule) -> Result<Vec<Rule>> {
        match rule {
            SurfaceRule::Rule { head, body } => Ok(vec![Rule::Weight(lower_body(*head, body)?)]),
            SurfaceRule::Choice { heads, pos, neg } => {
                let choice = ChoiceRule::new(heads.iter().copied(), pos.iter().copied(), neg.iter().copied())
                    .ok_or_else(|| Error::Desugar("choice rule with an empty head".into()))?;
                Ok(vec![Rule::Choice(choice)])
            }
            SurfaceRule::Integrity(body) => {
                let f = self.falsity_atom();
                let mut r = lower_body(f, body)?;
                // `not f` must make the body unreachable when f is true:
                // its weight exceeds the slack between total weight and bound.
                let slack = r.total_weight().saturating_sub(r.bound);
                let w = slack + 1;
                r.bound += w;
                r = WeightRule::new(
                    f,
                    r.bound,
                    r.pos.iter().map(|l| (l.atom, l.weight)),
                    r.neg.iter().map(|l| (l.atom, l.weight)).chain([(f, w)]),
                );
                Ok(vec![Rule::Weight(r)])
            }
            SurfaceRule::Compute { pos, neg } => {
                let mut out = Vec::new();
                for &b in pos {
                    out.extend(self.desugar(&SurfaceRule::Integrity(SurfaceBody::Basic {
                        pos: vec![],
                        neg: vec![b],
                    }))?);
                }
                for &c in neg {
                    out.extend(self.desugar(&SurfaceRule::Integrity(SurfaceBody::Basic {
                        pos: vec![c],
                        neg: vec![],
                    }))?);
                }
                Ok(out)
            }
            SurfaceRule::Minimize => Err(Error::Unsupported("minimize statement".into())),
        }
    }
}

/// Desugars a single rule with a private integrity atom. Returns the rules
/// and the integrity atom, if one was needed.
pub fn desugar(rule: &SurfaceRule) -> Result<(Vec<Rule>, Option<Atom>)> {
    let mut d = Desugarer::new();
    let rules = d.desugar(rule)?;
    Ok((rules, d.falsity()))
}
