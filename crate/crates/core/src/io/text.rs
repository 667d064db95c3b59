//! The textual module format.
//!
//! ```text
//! #input b.
//! #output a.
//! a :- b.
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::atom::{Atom, AtomSet};
use crate::desugar::{Desugarer, SurfaceBody, SurfaceRule};
use crate::error::{Error, Location, Result};
use crate::module::Module;
use crate::rule::{Rule, WeightRule};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Directive(String),
    Dot,
    Comma,
    If,
    LBrace,
    RBrace,
    Le,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    at: Location,
}

fn syntax(at: &Location, message: impl Into<String>) -> Error {
    Error::Syntax {
        location: at.clone(),
        message: message.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn here(&self) -> Location {
        Location {
            line: self.line,
            column: self.column,
        }
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| is_ident_char(c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn int(&mut self, negative: bool) -> Result<i64> {
        let at = self.here();
        let mut s = String::from(if negative { "-" } else { "" });
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s.parse().map_err(|_| syntax(&at, format!("bad integer {s}")))
    }

    /// Argument list of a function-style atom, whitespace removed.
    fn args(&mut self) -> Result<String> {
        let at = self.here();
        let mut depth = 0usize;
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(syntax(&at, "unterminated argument list")),
                Some(c) if c.is_whitespace() => {}
                Some(c) => {
                    s.push(c);
                    match c {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                return Ok(s);
                            }
                        }
                        _ if is_ident_char(c) || c == ',' || c == '-' || c == '"' => {}
                        _ => return Err(syntax(&at, format!("unexpected {c:?} in argument list"))),
                    }
                }
            }
        }
    }

    fn tokens(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '%' {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let at = self.here();
            let Some(c) = self.peek() else { break };
            let tok = match c {
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                '=' => {
                    self.bump();
                    Tok::Eq
                }
                ':' => {
                    self.bump();
                    if self.bump() != Some('-') {
                        return Err(syntax(&at, "expected ':-'"));
                    }
                    Tok::If
                }
                '<' => {
                    self.bump();
                    if self.bump() != Some('=') {
                        return Err(syntax(&at, "expected '<='"));
                    }
                    Tok::Le
                }
                '#' => {
                    self.bump();
                    Tok::Directive(self.ident())
                }
                '-' => {
                    self.bump();
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(syntax(&at, "expected a digit after '-'"));
                    }
                    Tok::Int(self.int(true)?)
                }
                c if c.is_ascii_digit() => Tok::Int(self.int(false)?),
                c if is_ident_start(c) => {
                    let mut name = self.ident();
                    if self.peek() == Some('(') {
                        name.push_str(&self.args()?);
                    }
                    Tok::Ident(name)
                }
                c => return Err(syntax(&at, format!("unexpected character {c:?}"))),
            };
            out.push(Token { tok, at });
        }
        Ok(out)
    }
}

/// `_h<k>` placeholders denote nameless atoms local to one document.
fn placeholder_index(name: &str) -> Option<u64> {
    let digits = name.strip_prefix("_h")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: Location,
    placeholders: HashMap<u64, Atom>,
}

#[derive(Default)]
struct Headers {
    seen: bool,
    input: AtomSet,
    output: AtomSet,
    hidden: AtomSet,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at(&self) -> Location {
        self.toks
            .get(self.pos)
            .map_or_else(|| self.end.clone(), |t| t.at.clone())
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.at();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(syntax(&at, format!("expected {what}, found {}", describe(&t)))),
            None => Err(syntax(&at, format!("expected {what}, found end of input"))),
        }
    }

    fn atom_of(&self, name: &str) -> Atom {
        match placeholder_index(name) {
            Some(k) => self.placeholders[&k],
            None => Atom::named(name),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let at = self.at();
        match self.next() {
            Some(Tok::Ident(name)) if !is_keyword(&name) => Ok(self.atom_of(&name)),
            Some(t) => Err(syntax(&at, format!("expected an atom, found {}", describe(&t)))),
            None => Err(syntax(&at, "expected an atom, found end of input")),
        }
    }

    fn atom_list(&mut self, close: Tok) -> Result<Vec<Atom>> {
        let mut out = Vec::new();
        if self.peek() == Some(&close) {
            return Ok(out);
        }
        loop {
            out.push(self.atom()?);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn literal(&mut self) -> Result<(Atom, bool)> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "not") {
            self.pos += 1;
            Ok((self.atom()?, false))
        } else {
            Ok((self.atom()?, true))
        }
    }

    fn literal_list(&mut self, close: Option<Tok>) -> Result<(Vec<Atom>, Vec<Atom>)> {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        if close.is_some() && self.peek() == close.as_ref() {
            return Ok((pos, neg));
        }
        loop {
            let (a, positive) = self.literal()?;
            if positive {
                pos.push(a);
            } else {
                neg.push(a);
            }
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok((pos, neg));
            }
        }
    }

    fn body(&mut self) -> Result<SurfaceBody> {
        if let Some(&Tok::Int(bound)) = self.peek() {
            self.pos += 1;
            if self.peek() == Some(&Tok::Le) {
                self.pos += 1;
                self.expect(Tok::LBrace, "'{'")?;
                let (mut pos, mut neg) = (Vec::new(), Vec::new());
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        let (a, positive) = self.literal()?;
                        self.expect(Tok::Eq, "'='")?;
                        let at = self.at();
                        let w = match self.next() {
                            Some(Tok::Int(w)) => w,
                            _ => return Err(syntax(&at, "expected a weight")),
                        };
                        if positive {
                            pos.push((a, w));
                        } else {
                            neg.push((a, w));
                        }
                        if self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "'}'")?;
                return Ok(SurfaceBody::Weight { bound, pos, neg });
            }
            self.expect(Tok::LBrace, "'{' or '<='")?;
            let (pos, neg) = self.literal_list(Some(Tok::RBrace))?;
            self.expect(Tok::RBrace, "'}'")?;
            return Ok(SurfaceBody::Cardinality { bound, pos, neg });
        }
        let (pos, neg) = self.literal_list(None)?;
        Ok(SurfaceBody::Basic { pos, neg })
    }

    fn statement(&mut self, headers: &mut Headers) -> Result<Option<SurfaceRule>> {
        let at = self.at();
        match self.peek().cloned() {
            Some(Tok::Directive(d)) if d == "minimize" || d == "maximize" => {
                Err(Error::Unsupported(format!("#{d} statement at {at}")))
            }
            Some(Tok::Directive(d)) => {
                self.pos += 1;
                if d == "module" {
                    self.next();
                    self.expect(Tok::Dot, "'.'")?;
                    return Ok(None);
                }
                let atoms = self.atom_list(Tok::Dot)?;
                self.expect(Tok::Dot, "'.'")?;
                let target = match d.as_str() {
                    "input" => &mut headers.input,
                    "output" => &mut headers.output,
                    "hidden" => &mut headers.hidden,
                    _ => return Err(syntax(&at, format!("unknown directive #{d}"))),
                };
                headers.seen = true;
                target.extend(atoms);
                Ok(None)
            }
            Some(Tok::Ident(k)) if k == "compute" => {
                self.pos += 1;
                self.expect(Tok::LBrace, "'{'")?;
                let (pos, neg) = self.literal_list(Some(Tok::RBrace))?;
                self.expect(Tok::RBrace, "'}'")?;
                self.expect(Tok::Dot, "'.'")?;
                Ok(Some(SurfaceRule::Compute { pos, neg }))
            }
            Some(Tok::Ident(k)) if k == "minimize" || k == "maximize" => {
                Err(Error::Unsupported(format!("{k} statement at {at}")))
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let heads = self.atom_list(Tok::RBrace)?;
                self.expect(Tok::RBrace, "'}'")?;
                if heads.is_empty() {
                    return Err(syntax(&at, "choice rule with an empty head"));
                }
                let (mut pos, mut neg) = (Vec::new(), Vec::new());
                if self.peek() == Some(&Tok::If) {
                    self.pos += 1;
                    let body_at = self.at();
                    match self.body()? {
                        SurfaceBody::Basic { pos: p, neg: n } => {
                            pos = p;
                            neg = n;
                        }
                        _ => return Err(syntax(&body_at, "choice rules take a basic body")),
                    }
                }
                self.expect(Tok::Dot, "'.'")?;
                Ok(Some(SurfaceRule::Choice { heads, pos, neg }))
            }
            Some(Tok::If) => {
                self.pos += 1;
                let body = self.body()?;
                self.expect(Tok::Dot, "'.'")?;
                Ok(Some(SurfaceRule::Integrity(body)))
            }
            Some(_) => {
                let head = self.atom()?;
                let body = if self.peek() == Some(&Tok::If) {
                    self.pos += 1;
                    self.body()?
                } else {
                    SurfaceBody::empty()
                };
                self.expect(Tok::Dot, "'.'")?;
                Ok(Some(SurfaceRule::Rule { head, body }))
            }
            None => Ok(None),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "not" | "compute" | "minimize" | "maximize")
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Int(i) => format!("'{i}'"),
        Tok::Directive(d) => format!("'#{d}'"),
        Tok::Dot => "'.'".into(),
        Tok::Comma => "','".into(),
        Tok::If => "':-'".into(),
        Tok::LBrace => "'{'".into(),
        Tok::RBrace => "'}'".into(),
        Tok::Le => "'<='".into(),
        Tok::Eq => "'='".into(),
    }
}

/// Parses one module. Files without any `#input`, `#output` or `#hidden`
/// declaration are read as plain programs: every named atom is an output.
pub fn parse_text(src: &str) -> Result<Module> {
    let lexer = Lexer::new(src);
    let toks = lexer.tokens()?;
    let end = toks.last().map_or(Location { line: 1, column: 1 }, |t| t.at.clone());
    let mut keys: Vec<u64> = toks
        .iter()
        .filter_map(|t| match &t.tok {
            Tok::Ident(s) => placeholder_index(s),
            _ => None,
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let placeholders: HashMap<u64, Atom> = keys.iter().copied().zip(Atom::fresh_many(keys.len())).collect();
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        placeholders,
    };
    let mut headers = Headers::default();
    let mut desugarer = Desugarer::new();
    let mut rules: Vec<Rule> = Vec::new();
    while p.pos < p.toks.len() {
        if let Some(r) = p.statement(&mut headers)? {
            rules.extend(desugarer.desugar(&r)?);
        }
    }
    let Headers {
        seen,
        input,
        mut output,
        mut hidden,
    } = headers;
    if !seen {
        for a in crate::rule::rule_atoms(&rules) {
            if a.is_nameless() {
                hidden.insert(a);
            } else {
                output.insert(a);
            }
        }
    }
    hidden.extend(desugarer.falsity());
    Module::new(rules, input, output, hidden)
}

/// Names for printing: named atoms keep their names, nameless atoms become
/// `_h1, _h2, ...` in id order.
pub(crate) fn print_names(m: &Module) -> BTreeMap<Atom, String> {
    let mut names = BTreeMap::new();
    let mut k = 0;
    for a in m.atoms().into_iter().chain(m.rule_atoms()) {
        if names.contains_key(&a) {
            continue;
        }
        let name = match a.name() {
            Some(n) => n.to_string(),
            None => {
                k += 1;
                format!("_h{k}")
            }
        };
        names.insert(a, name);
    }
    names
}

fn sorted_names<'a>(atoms: impl IntoIterator<Item = &'a Atom>, names: &BTreeMap<Atom, String>) -> Vec<String> {
    let mut v: Vec<&String> = atoms.into_iter().map(|a| &names[a]).collect();
    v.sort_unstable_by(|a, b| name_cmp(a, b));
    v.into_iter().cloned().collect()
}

/// Named atoms by name; placeholders after them by number.
pub(crate) fn name_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    match (placeholder_index(a), placeholder_index(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Greater,
        (None, Some(_)) => std::cmp::Ordering::Less,
        (None, None) => a.cmp(b),
    }
}

fn print_weight_rule(w: &WeightRule, names: &BTreeMap<Atom, String>, out: &mut String) {
    out.push_str(&names[&w.head]);
    if w.is_basic() {
        if w.pos.is_empty() && w.neg.is_empty() {
            out.push('.');
            return;
        }
        out.push_str(" :- ");
        let mut lits = sorted_names(w.pos.iter().map(|l| &l.atom), names);
        lits.extend(
            sorted_names(w.neg.iter().map(|l| &l.atom), names)
                .into_iter()
                .map(|n| format!("not {n}")),
        );
        out.push_str(&lits.join(", "));
        out.push('.');
    } else if w.has_unit_weights() {
        let _ = write!(out, " :- {} {{", w.bound);
        let mut lits = sorted_names(w.pos.iter().map(|l| &l.atom), names);
        lits.extend(
            sorted_names(w.neg.iter().map(|l| &l.atom), names)
                .into_iter()
                .map(|n| format!("not {n}")),
        );
        out.push_str(&lits.join(", "));
        out.push_str("}.");
    } else {
        let _ = write!(out, " :- {} <= {{", w.bound);
        let mut pos: Vec<(&String, u64)> = w.pos.iter().map(|l| (&names[&l.atom], l.weight)).collect();
        pos.sort_unstable_by(|a, b| name_cmp(a.0, b.0));
        let mut neg: Vec<(&String, u64)> = w.neg.iter().map(|l| (&names[&l.atom], l.weight)).collect();
        neg.sort_unstable_by(|a, b| name_cmp(a.0, b.0));
        let lits: Vec<String> = pos
            .into_iter()
            .map(|(n, w)| format!("{n}={w}"))
            .chain(neg.into_iter().map(|(n, w)| format!("not {n}={w}")))
            .collect();
        out.push_str(&lits.join(", "));
        out.push_str("}.");
    }
}

pub(crate) fn print_rule(r: &Rule, names: &BTreeMap<Atom, String>) -> String {
    let mut out = String::new();
    match r {
        Rule::Weight(w) => print_weight_rule(w, names, &mut out),
        Rule::Choice(c) => {
            let _ = write!(out, "{{{}}}", sorted_names(&c.heads, names).join(", "));
            if !c.pos.is_empty() || !c.neg.is_empty() {
                out.push_str(" :- ");
                let mut lits = sorted_names(&c.pos, names);
                lits.extend(sorted_names(&c.neg, names).into_iter().map(|n| format!("not {n}")));
                out.push_str(&lits.join(", "));
            }
            out.push('.');
        }
    }
    out
}

/// Canonical text: non-empty signature sections, then rules sorted by their
/// printed form.
pub fn print_text(m: &Module) -> String {
    let names = print_names(m);
    let mut out = String::new();
    for (kw, set) in [("input", m.input()), ("output", m.output()), ("hidden", m.hidden())] {
        if !set.is_empty() {
            let _ = writeln!(out, "#{kw} {}.", sorted_names(set, &names).join(", "));
        }
    }
    let mut lines: Vec<String> = m.rules().iter().map(|r| print_rule(r, &names)).collect();
    lines.sort_unstable();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}
