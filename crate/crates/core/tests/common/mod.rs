#![allow(dead_code)]

use modsm::algebra::join;
use modsm::io::parse_text;
use modsm::module::set;
use modsm::{Atom, AtomSet, Module, Rule};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn a(name: &str) -> Atom {
    Atom::named(name)
}

pub fn text(src: &str) -> Module {
    parse_text(src).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub atoms: usize,
    pub rules: usize,
    pub normal: bool,
    pub hidden: f64,
    pub input: f64,
}

impl Shape {
    pub fn normal(atoms: usize, rules: usize) -> Shape {
        Shape {
            atoms,
            rules,
            normal: true,
            hidden: 0.2,
            input: 0.25,
        }
    }

    pub fn smodels(atoms: usize, rules: usize) -> Shape {
        Shape {
            normal: false,
            ..Shape::normal(atoms, rules)
        }
    }
}

fn pick(rng: &mut ChaCha8Rng, from: &[Atom], max: usize) -> Vec<Atom> {
    let k = rng.gen_range(0..=max.min(from.len()));
    from.choose_multiple(rng, k).copied().collect()
}

pub fn random_rule(rng: &mut ChaCha8Rng, heads: &[Atom], body: &[Atom], normal: bool) -> Rule {
    let head = *heads.choose(rng).unwrap();
    let kind = if normal { 0 } else { rng.gen_range(0..4) };
    match kind {
        0 => Rule::basic(head, pick(rng, body, 2), pick(rng, body, 2)),
        1 => {
            let hs = pick(rng, heads, 2);
            let hs = if hs.is_empty() { vec![head] } else { hs };
            Rule::choice(hs, pick(rng, body, 2), pick(rng, body, 1))
        }
        2 => {
            let pos = pick(rng, body, 3);
            let neg = pick(rng, body, 2);
            let n = (pos.len() + neg.len()) as u64;
            let bound = rng.gen_range(0..=n + 1);
            Rule::weight(
                head,
                bound,
                pos.into_iter().map(|x| (x, 1)),
                neg.into_iter().map(|x| (x, 1)),
            )
        }
        _ => {
            let pos: Vec<(Atom, u64)> = pick(rng, body, 3)
                .into_iter()
                .map(|x| (x, rng.gen_range(0..=3)))
                .collect();
            let neg: Vec<(Atom, u64)> = pick(rng, body, 2)
                .into_iter()
                .map(|x| (x, rng.gen_range(0..=3)))
                .collect();
            let total: u64 = pos.iter().chain(&neg).map(|l| l.1).sum();
            let bound = rng.gen_range(0..=total + 1);
            Rule::weight(head, bound, pos, neg)
        }
    }
}

/// A random module over atoms `<prefix>0 ..`.
pub fn random_module(rng: &mut ChaCha8Rng, prefix: &str, shape: Shape) -> Module {
    let atoms: Vec<Atom> = (0..shape.atoms).map(|i| a(&format!("{prefix}{i}"))).collect();
    let (mut input, mut output, mut hidden) = (AtomSet::new(), AtomSet::new(), AtomSet::new());
    for &x in &atoms {
        let r: f64 = rng.gen();
        if r < shape.input {
            input.insert(x);
        } else if r < shape.input + shape.hidden {
            hidden.insert(x);
        } else {
            output.insert(x);
        }
    }
    if output.is_empty() && hidden.is_empty() {
        let x = *input.iter().next().unwrap();
        input.remove(&x);
        output.insert(x);
    }
    let heads: Vec<Atom> = output.iter().chain(&hidden).copied().collect();
    let n = rng.gen_range(0..=shape.rules);
    let rules: Vec<Rule> = (0..n).map(|_| random_rule(rng, &heads, &atoms, shape.normal)).collect();
    Module::new(rules, input, output, hidden).unwrap()
}

/// Two random modules whose join is defined. Atoms are owned by the first
/// module, the second, or neither (shared input).
pub fn random_joinable_pair(
    rng: &mut ChaCha8Rng,
    prefix: &str,
    atoms: usize,
    rules: usize,
    normal: bool,
) -> (Module, Module) {
    loop {
        let all: Vec<Atom> = (0..atoms).map(|i| a(&format!("{prefix}{i}"))).collect();
        let mut owner = vec![0usize; atoms];
        let mut hidden = vec![false; atoms];
        for i in 0..atoms {
            owner[i] = rng.gen_range(0..3);
            hidden[i] = owner[i] > 0 && rng.gen_bool(0.2);
        }
        let build = |rng: &mut ChaCha8Rng, k: usize| -> Module {
            let owned: Vec<Atom> = (0..atoms).filter(|&i| owner[i] == k).map(|i| all[i]).collect();
            let usable: Vec<Atom> = (0..atoms)
                .filter(|&i| owner[i] == k || !hidden[i])
                .map(|i| all[i])
                .collect();
            let n = if owned.is_empty() { 0 } else { rng.gen_range(0..=rules) };
            let rs: Vec<Rule> = (0..n).map(|_| random_rule(rng, &owned, &usable, normal)).collect();
            let out: AtomSet = (0..atoms)
                .filter(|&i| owner[i] == k && !hidden[i])
                .map(|i| all[i])
                .collect();
            let hid: AtomSet = (0..atoms)
                .filter(|&i| owner[i] == k && hidden[i])
                .map(|i| all[i])
                .collect();
            let used = modsm::rule::rule_atoms(&rs);
            let inp: AtomSet = used
                .iter()
                .filter(|x| !out.contains(x) && !hid.contains(x))
                .copied()
                .collect();
            Module::new(rs, inp, out, hid).unwrap()
        };
        let p = build(rng, 1);
        let q = build(rng, 2);
        if join(&p, &q).is_ok() {
            return (p, q);
        }
    }
}

/// `P` with every hidden atom renamed by appending `suffix`.
pub fn rename_hidden(m: &Module, suffix: &str) -> Module {
    let map: std::collections::HashMap<Atom, Atom> = m
        .hidden()
        .iter()
        .map(|&h| (h, a(&format!("{}{suffix}", h.name().unwrap()))))
        .collect();
    let f = |x: Atom| map.get(&x).copied().unwrap_or(x);
    Module::new(
        m.rules().iter().map(|r| r.map_atoms(f)),
        m.input().clone(),
        m.output().clone(),
        m.hidden().iter().map(|&h| f(h)).collect(),
    )
    .unwrap()
}

/// Module `H^n`: selects cycle candidates among the arcs.
pub fn hamiltonian(n: usize) -> Module {
    let mut src = String::new();
    let arcs: Vec<String> = pairs(n).map(|(x, y)| format!("arc({x},{y})")).collect();
    let hcs: Vec<String> = pairs(n).map(|(x, y)| format!("hc({x},{y})")).collect();
    src.push_str(&format!(
        "#input {}.\n#output {}.\n#hidden c, d.\n",
        arcs.join(", "),
        hcs.join(", ")
    ));
    for (x, y) in pairs(n) {
        src.push_str(&format!("{{hc({x},{y})}} :- arc({x},{y}).\n"));
    }
    for x in 1..=n {
        let out: Vec<String> = (1..=n).map(|y| format!("hc({x},{y})")).collect();
        let inc: Vec<String> = (1..=n).map(|y| format!("hc({y},{x})")).collect();
        src.push_str(&format!("c :- 2 {{{}}}.\n", out.join(", ")));
        src.push_str(&format!(
            "c :- {}.\n",
            out.iter().map(|s| format!("not {s}")).collect::<Vec<_>>().join(", ")
        ));
        src.push_str(&format!("c :- 2 {{{}}}.\n", inc.join(", ")));
        src.push_str(&format!(
            "c :- {}.\n",
            inc.iter().map(|s| format!("not {s}")).collect::<Vec<_>>().join(", ")
        ));
    }
    src.push_str("d :- not d, c.\n");
    text(&src)
}

/// Module `R^n`: reachability from node 1 along the selected edges.
pub fn reachability(n: usize) -> Module {
    let hcs: Vec<String> = pairs(n).map(|(x, y)| format!("hc({x},{y})")).collect();
    let reached: Vec<String> = (1..=n).map(|x| format!("reached({x})")).collect();
    let mut src = format!(
        "#input {}.\n#output {}.\n#hidden e.\n",
        hcs.join(", "),
        reached.join(", ")
    );
    for y in 1..=n {
        src.push_str(&format!("reached({y}) :- hc(1,{y}).\n"));
        for x in 2..=n {
            src.push_str(&format!("reached({y}) :- reached({x}), hc({x},{y}).\n"));
        }
        src.push_str(&format!("e :- not e, not reached({y}).\n"));
    }
    text(&src)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |x| (1..=n).map(move |y| (x, y)))
}

pub fn gs_pair() -> (Module, Module) {
    (
        text("#input b. #output a. a :- b."),
        text("#input a. #output b. b :- a."),
    )
}

pub fn cycle_triple() -> [Module; 3] {
    [
        text("#input b. #output a. a :- not b."),
        text("#input c. #output b. b :- not c."),
        text("#input a. #output c. c :- not a."),
    ]
}

pub fn splitting_program() -> Module {
    text("a :- not b. b :- not a. c :- a.")
}

pub fn ex3_pair() -> (Module, Module) {
    (
        text("#input b. #output a, c. a :- b. a :- not c."),
        text("#input a. #output b. b :- a."),
    )
}

pub fn names(xs: &[&str]) -> AtomSet {
    set(xs)
}
