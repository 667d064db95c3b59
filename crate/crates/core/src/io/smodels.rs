//! The numeric smodels interchange format.
//!
//! ```text
//! 1 2 2 1 4 3
//! 0
//! 2 a
//! 3 b
//! 4 c
//! 0
//! B+
//! 0
//! B-
//! 0
//! 1
//! ```
//!
//! The interface of a module is carried by an optional first line
//! `% modsm-iface input <ids> output <ids> hidden <ids>`. Without it, named
//! atoms are outputs and nameless atoms are hidden.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::atom::{sorted_for_display, Atom, AtomSet};
use crate::desugar::{Desugarer, SurfaceRule};
use crate::error::{Error, Result};
use crate::module::Module;
use crate::rule::Rule;

const IFACE_PREFIX: &str = "% modsm-iface";

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

struct Fields<'a> {
    line: usize,
    it: std::str::SplitAsciiWhitespace<'a>,
}

impl Fields<'_> {
    fn num(&mut self, what: &str) -> Result<u64> {
        let tok = self
            .it
            .next()
            .ok_or_else(|| format_err(self.line, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| format_err(self.line, format!("expected {what}, found {tok:?}")))
    }

    fn id(&mut self) -> Result<u64> {
        let id = self.num("atom id")?;
        if id == 0 {
            return Err(format_err(self.line, "atom id 0"));
        }
        Ok(id)
    }

    fn ids(&mut self, n: u64) -> Result<Vec<u64>> {
        (0..n).map(|_| self.id()).collect()
    }

    fn finish(mut self) -> Result<()> {
        match self.it.next() {
            None => Ok(()),
            Some(t) => Err(format_err(self.line, format!("trailing field {t:?}"))),
        }
    }
}

enum Raw {
    Weight {
        head: u64,
        bound: u64,
        pos: Vec<(u64, u64)>,
        neg: Vec<(u64, u64)>,
    },
    Choice {
        heads: Vec<u64>,
        pos: Vec<u64>,
        neg: Vec<u64>,
    },
}

fn literal_counts(f: &mut Fields<'_>) -> Result<(u64, u64)> {
    let n = f.num("literal count")?;
    let neg = f.num("negative literal count")?;
    if neg > n {
        return Err(format_err(f.line, format!("{neg} negative literals out of {n}")));
    }
    Ok((n, neg))
}

fn raw_rule(kind: u64, f: &mut Fields<'_>) -> Result<Raw> {
    let unit = |v: Vec<u64>| v.into_iter().map(|a| (a, 1)).collect::<Vec<_>>();
    match kind {
        1 => {
            let head = f.id()?;
            let (n, nn) = literal_counts(f)?;
            let neg = f.ids(nn)?;
            let pos = f.ids(n - nn)?;
            Ok(Raw::Weight {
                head,
                bound: n,
                pos: unit(pos),
                neg: unit(neg),
            })
        }
        2 => {
            let head = f.id()?;
            let (n, nn) = literal_counts(f)?;
            let bound = f.num("bound")?;
            let neg = f.ids(nn)?;
            let pos = f.ids(n - nn)?;
            Ok(Raw::Weight {
                head,
                bound,
                pos: unit(pos),
                neg: unit(neg),
            })
        }
        3 => {
            let nh = f.num("head count")?;
            if nh == 0 {
                return Err(format_err(f.line, "choice rule with an empty head"));
            }
            let heads = f.ids(nh)?;
            let (n, nn) = literal_counts(f)?;
            let neg = f.ids(nn)?;
            let pos = f.ids(n - nn)?;
            Ok(Raw::Choice { heads, pos, neg })
        }
        5 => {
            let head = f.id()?;
            let bound = f.num("bound")?;
            let (n, nn) = literal_counts(f)?;
            let neg = f.ids(nn)?;
            let pos = f.ids(n - nn)?;
            let mut weights = (0..n).map(|_| f.num("weight")).collect::<Result<Vec<_>>>()?.into_iter();
            let neg = neg.into_iter().zip(weights.by_ref()).collect();
            let pos = pos.into_iter().zip(weights).collect();
            Ok(Raw::Weight { head, bound, pos, neg })
        }
        6 => Err(Error::Unsupported(format!(
            "minimize statement (rule type 6) at line {}",
            f.line
        ))),
        8 => Err(Error::Unsupported(format!(
            "disjunctive rule (rule type 8) at line {}",
            f.line
        ))),
        k => Err(format_err(f.line, format!("unknown rule type {k}"))),
    }
}

struct Iface {
    input: Vec<u64>,
    output: Vec<u64>,
    hidden: Vec<u64>,
}

fn parse_iface(line: usize, rest: &str) -> Result<Iface> {
    let mut iface = Iface {
        input: Vec::new(),
        output: Vec::new(),
        hidden: Vec::new(),
    };
    let mut target = None;
    for tok in rest.split_ascii_whitespace() {
        match tok {
            "input" => target = Some(&mut iface.input),
            "output" => target = Some(&mut iface.output),
            "hidden" => target = Some(&mut iface.hidden),
            _ => {
                let id: u64 = tok
                    .parse()
                    .ok()
                    .filter(|&id| id > 0)
                    .ok_or_else(|| format_err(line, format!("bad interface entry {tok:?}")))?;
                match target.as_deref_mut() {
                    Some(v) => v.push(id),
                    None => return Err(format_err(line, "interface id before a section keyword")),
                }
            }
        }
    }
    Ok(iface)
}

/// Reads one module in the numeric format.
pub fn decode_smodels(bytes: &[u8]) -> Result<Module> {
    let text = std::str::from_utf8(bytes).map_err(|e| format_err(0, format!("invalid UTF-8: {e}")))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let mut last_line = 0;

    let mut iface = None;
    while let Some(&(no, l)) = lines.peek() {
        let t = l.trim();
        if let Some(rest) = t.strip_prefix(IFACE_PREFIX) {
            if iface.is_some() {
                return Err(format_err(no, "duplicate interface header"));
            }
            iface = Some(parse_iface(no, rest)?);
        } else if !(t.is_empty() || t.starts_with('%')) {
            break;
        }
        lines.next();
    }
    let mut next = |what: &str| -> Result<(usize, &str)> {
        for (no, l) in lines.by_ref() {
            last_line = no;
            let t = l.trim();
            if !t.is_empty() {
                return Ok((no, t));
            }
        }
        Err(format_err(
            last_line + 1,
            format!("unexpected end of input, expected {what}"),
        ))
    };

    let mut raws = Vec::new();
    loop {
        let (no, l) = next("a rule or 0")?;
        let mut f = Fields {
            line: no,
            it: l.split_ascii_whitespace(),
        };
        let kind = f.num("rule type")?;
        if kind == 0 {
            f.finish()?;
            break;
        }
        raws.push(raw_rule(kind, &mut f)?);
        f.finish()?;
    }

    let mut names: BTreeMap<u64, String> = BTreeMap::new();
    let mut seen_names: HashMap<String, u64> = HashMap::new();
    loop {
        let (no, l) = next("a symbol table entry or 0")?;
        if l == "0" {
            break;
        }
        let (id, name) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| format_err(no, "symbol without a name"))?;
        let id: u64 = id
            .parse()
            .ok()
            .filter(|&id| id > 0)
            .ok_or_else(|| format_err(no, format!("bad atom id {id:?}")))?;
        let name = name.trim().to_string();
        if names.contains_key(&id) {
            return Err(format_err(no, format!("atom id {id} named twice")));
        }
        if let Some(other) = seen_names.insert(name.clone(), id) {
            return Err(format_err(no, format!("name {name} used by ids {other} and {id}")));
        }
        names.insert(id, name);
    }

    let mut compute = [Vec::new(), Vec::new()];
    for (k, marker) in ["B+", "B-"].into_iter().enumerate() {
        let (no, l) = next(marker)?;
        if l != marker {
            return Err(format_err(no, format!("expected {marker}, found {l:?}")));
        }
        loop {
            let (no, l) = next("an atom id or 0")?;
            let mut f = Fields {
                line: no,
                it: l.split_ascii_whitespace(),
            };
            let id = f.num("atom id")?;
            f.finish()?;
            if id == 0 {
                break;
            }
            compute[k].push(id);
        }
    }
    let (no, l) = next("the model count")?;
    l.parse::<u64>()
        .map_err(|_| format_err(no, format!("bad model count {l:?}")))?;
    if let Some((no, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(format_err(no, format!("trailing content {:?}", l.trim())));
    }

    let mut all_ids: Vec<u64> = names.keys().copied().collect();
    for r in &raws {
        match r {
            Raw::Weight { head, pos, neg, .. } => {
                all_ids.push(*head);
                all_ids.extend(pos.iter().chain(neg).map(|l| l.0));
            }
            Raw::Choice { heads, pos, neg } => all_ids.extend(heads.iter().chain(pos).chain(neg)),
        }
    }
    all_ids.extend(compute.iter().flatten());
    if let Some(i) = &iface {
        all_ids.extend(i.input.iter().chain(&i.output).chain(&i.hidden));
    }
    all_ids.sort_unstable();
    all_ids.dedup();
    let nameless: Vec<u64> = all_ids.iter().copied().filter(|id| !names.contains_key(id)).collect();
    let mut atom_of: HashMap<u64, Atom> = nameless.iter().copied().zip(Atom::fresh_many(nameless.len())).collect();
    for (&id, name) in &names {
        atom_of.insert(id, Atom::named(name));
    }
    let at = |id: &u64| atom_of[id];

    let mut desugarer = Desugarer::new();
    let mut rules: Vec<Rule> = Vec::with_capacity(raws.len());
    for r in raws {
        rules.push(match r {
            Raw::Weight { head, bound, pos, neg } => Rule::weight(
                at(&head),
                bound,
                pos.iter().map(|(a, w)| (at(a), *w)),
                neg.iter().map(|(a, w)| (at(a), *w)),
            ),
            Raw::Choice { heads, pos, neg } => {
                Rule::choice(heads.iter().map(at), pos.iter().map(at), neg.iter().map(at))
            }
        });
    }
    if !compute[0].is_empty() || !compute[1].is_empty() {
        rules.extend(desugarer.desugar(&SurfaceRule::Compute {
            pos: compute[0].iter().map(at).collect(),
            neg: compute[1].iter().map(at).collect(),
        })?);
    }

    let (mut input, mut output, mut hidden) = (AtomSet::new(), AtomSet::new(), AtomSet::new());
    let mut classified = AtomSet::new();
    if let Some(i) = &iface {
        for (ids, set) in [
            (&i.input, &mut input),
            (&i.output, &mut output),
            (&i.hidden, &mut hidden),
        ] {
            for id in ids {
                set.insert(at(id));
                classified.insert(at(id));
            }
        }
    }
    for id in &all_ids {
        let a = at(id);
        if classified.contains(&a) {
            continue;
        }
        if names.contains_key(id) {
            output.insert(a);
        } else {
            hidden.insert(a);
        }
    }
    hidden.extend(desugarer.falsity());
    Module::new(rules, input, output, hidden)
}

/// Writes one module in the numeric format. Atom ids follow display order
/// starting at 1; rule lines are sorted.
pub fn encode_smodels(m: &Module) -> Vec<u8> {
    let mut all = m.atoms();
    all.extend(m.rule_atoms());
    let order = sorted_for_display(all.iter().copied());
    let id: HashMap<Atom, usize> = order.iter().enumerate().map(|(i, &a)| (a, i + 1)).collect();
    let ids_of = |atoms: &mut dyn Iterator<Item = Atom>| -> Vec<usize> {
        let mut v: Vec<usize> = atoms.map(|a| id[&a]).collect();
        v.sort_unstable();
        v
    };

    let mut lines: Vec<String> = Vec::with_capacity(m.rules().len());
    for r in m.rules() {
        let mut s = String::new();
        match r {
            Rule::Weight(w) => {
                let n = w.pos.len() + w.neg.len();
                let mut neg: Vec<(usize, u64)> = w.neg.iter().map(|l| (id[&l.atom], l.weight)).collect();
                let mut pos: Vec<(usize, u64)> = w.pos.iter().map(|l| (id[&l.atom], l.weight)).collect();
                neg.sort_unstable();
                pos.sort_unstable();
                let h = id[&w.head];
                if w.is_basic() {
                    let _ = write!(s, "1 {h} {n} {}", neg.len());
                } else if w.has_unit_weights() {
                    let _ = write!(s, "2 {h} {n} {} {}", neg.len(), w.bound);
                } else {
                    let _ = write!(s, "5 {h} {} {n} {}", w.bound, neg.len());
                }
                for (a, _) in neg.iter().chain(&pos) {
                    let _ = write!(s, " {a}");
                }
                if !w.is_basic() && !w.has_unit_weights() {
                    for (_, wt) in neg.iter().chain(&pos) {
                        let _ = write!(s, " {wt}");
                    }
                }
            }
            Rule::Choice(c) => {
                let heads = ids_of(&mut c.heads.iter().copied());
                let neg = ids_of(&mut c.neg.iter().copied());
                let pos = ids_of(&mut c.pos.iter().copied());
                let _ = write!(s, "3 {}", heads.len());
                for h in &heads {
                    let _ = write!(s, " {h}");
                }
                let _ = write!(s, " {} {}", neg.len() + pos.len(), neg.len());
                for a in neg.iter().chain(&pos) {
                    let _ = write!(s, " {a}");
                }
            }
        }
        lines.push(s);
    }
    lines.sort_unstable();

    let used = m.rule_atoms();
    let needs_iface = !m.input().is_empty()
        || m.output().iter().any(|a| a.is_nameless())
        || m.hidden().iter().any(|a| !a.is_nameless() || !used.contains(a));

    let mut out = String::new();
    if needs_iface {
        out.push_str(IFACE_PREFIX);
        for (kw, set) in [("input", m.input()), ("output", m.output()), ("hidden", m.hidden())] {
            let _ = write!(out, " {kw}");
            for i in ids_of(&mut set.iter().copied()) {
                let _ = write!(out, " {i}");
            }
        }
        out.push('\n');
    }
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out.push_str("0\n");
    for a in &order {
        if let Some(name) = a.name() {
            let _ = writeln!(out, "{} {name}", id[a]);
        }
    }
    out.push_str("0\nB+\n0\nB-\n0\n1\n");
    out.into_bytes()
}
