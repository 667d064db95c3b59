//! Dependency graphs, strongly connected components, hidden-atom closure and
//! loops.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt::Write as _;

use crate::algebra;
use crate::atom::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::module::Module;
use crate::rule::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepMode {
    /// `b → a` iff some rule has `a` in its head and `b` in its positive body.
    Positive,
    /// Also adds edges from negative body atoms.
    PositiveNegative,
}

/// A dependency graph over atoms. An edge `b → a` means `a` depends on `b`.
#[derive(Clone, Debug)]
pub struct DepGraph {
    vertices: Vec<Atom>,
    index: HashMap<Atom, usize>,
    succ: Vec<Vec<u32>>,
    mode: DepMode,
}

impl DepGraph {
    /// Builds the graph of `rules` over `vertices` (atoms of the rules are
    /// added if missing).
    pub fn from_rules(vertices: &AtomSet, rules: &[Rule], mode: DepMode) -> DepGraph {
        let mut all: AtomSet = vertices.clone();
        for r in rules {
            all.extend(r.atoms());
        }
        let vertices: Vec<Atom> = all.into_iter().collect();
        let index: HashMap<Atom, usize> = vertices.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut succ: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
        for r in rules {
            let body: Vec<Atom> = match mode {
                DepMode::Positive => r.pos_atoms().collect(),
                DepMode::PositiveNegative => r.body_atoms().collect(),
            };
            for b in body {
                for h in r.heads() {
                    succ[index[&b]].push(index[h] as u32);
                }
            }
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        DepGraph {
            vertices,
            index,
            succ,
            mode,
        }
    }

    pub fn vertices(&self) -> &[Atom] {
        &self.vertices
    }

    pub fn mode(&self) -> DepMode {
        self.mode
    }

    pub fn index_of(&self, a: Atom) -> Option<usize> {
        self.index.get(&a).copied()
    }

    pub(crate) fn successors(&self) -> &[Vec<u32>] {
        &self.succ
    }

    pub fn edges(&self) -> BTreeSet<(Atom, Atom)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(b, s)| s.iter().map(move |&a| (self.vertices[b], self.vertices[a as usize])))
            .collect()
    }

    pub fn has_edge(&self, from: Atom, to: Atom) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Some(b), Some(a)) => self.succ[b].binary_search(&(a as u32)).is_ok(),
            _ => false,
        }
    }

    /// Graphviz rendering, for debugging.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dep {\n");
        for v in crate::atom::sorted_for_display(self.vertices.iter().copied()) {
            let _ = writeln!(out, "  \"{v}\";");
        }
        let mut edges: Vec<(Atom, Atom)> = self.edges().into_iter().collect();
        edges.sort_by(|x, y| x.0.display_cmp(y.0).then(x.1.display_cmp(y.1)));
        for (b, a) in edges {
            let _ = writeln!(out, "  \"{b}\" -> \"{a}\";");
        }
        out.push_str("}\n");
        out
    }
}

/// The dependency graph of a module over Hb(P).
pub fn dep_graph(m: &Module, mode: DepMode) -> DepGraph {
    DepGraph::from_rules(&m.atoms(), m.rules(), mode)
}

/// Strongly connected components of an index graph. Components come out
/// in reverse topological order (every edge leads to an earlier or the same
/// component). Iterative, so deep graphs do not overflow the stack.
pub fn tarjan(succ: &[Vec<u32>]) -> Vec<Vec<u32>> {
    const UNVISITED: u32 = u32::MAX;
    let n = succ.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, usize)> = Vec::new();
    let mut next = 0u32;
    let mut components = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        frames.push((root as u32, 0));

        while let Some(&(v, pos)) = frames.last() {
            let v = v as usize;
            if pos < succ[v].len() {
                frames.last_mut().unwrap().1 += 1;
                let w = succ[v][pos] as usize;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    frames.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(u, _)) = frames.last() {
                    let u = u as usize;
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp.push(w);
                        if w as usize == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    components
}

/// Orders the nodes of an acyclic graph topologically, breaking ties by
/// `key` (smallest first). Nodes on cycles are emitted last, by key.
pub(crate) fn canonical_topo_order(n: usize, edges: &[(usize, usize)], key: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(u, v) in edges {
        if u != v && seen.insert((u, v)) {
            succ[u].push(v);
            indeg[v] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n)
        .filter(|&i| indeg[i] == 0)
        .map(|i| Reverse((key(i), i)))
        .collect();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while let Some(Reverse((_, u))) = heap.pop() {
        order.push(u);
        placed[u] = true;
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                heap.push(Reverse((key(v), v)));
            }
        }
    }
    if order.len() < n {
        let mut rest: Vec<usize> = (0..n).filter(|&i| !placed[i]).collect();
        rest.sort_by_key(|&i| key(i));
        order.extend(rest);
    }
    order
}

/// SCCs in topological order: dependencies before dependents, ties broken by
/// the smallest atom id in the component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<AtomSet>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Maps each atom to the position of its component.
    pub fn component_index(&self) -> HashMap<Atom, usize> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&a| (a, i)))
            .collect()
    }
}

pub(crate) fn scc_indices(g: &DepGraph) -> Vec<Vec<u32>> {
    let comps = tarjan(g.successors());
    let mut comp_of = vec![0usize; g.vertices.len()];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v as usize] = ci;
        }
    }
    let mut edges = Vec::new();
    for (b, s) in g.succ.iter().enumerate() {
        for &a in s {
            let (cb, ca) = (comp_of[b], comp_of[a as usize]);
            if cb != ca {
                edges.push((cb, ca));
            }
        }
    }
    let order = canonical_topo_order(comps.len(), &edges, |c| comps[c][0] as usize);
    order.into_iter().map(|c| comps[c].clone()).collect()
}

pub fn sccs(g: &DepGraph) -> SccPartition {
    SccPartition {
        components: scc_indices(g)
            .into_iter()
            .map(|c| c.into_iter().map(|v| g.vertices[v as usize]).collect())
            .collect(),
    }
}

/// An SCC of `Dep(m1 ⊕ m2)` containing outputs of both modules, if any.
pub fn shared_scc(m1: &Module, m2: &Module) -> Result<Option<AtomSet>> {
    let composed = algebra::compose(m1, m2)?;
    let g = dep_graph(&composed, DepMode::Positive);
    Ok(sccs(&g)
        .components
        .into_iter()
        .find(|s| !s.is_disjoint(m1.output()) && !s.is_disjoint(m2.output())))
}

pub fn mutually_dependent(m1: &Module, m2: &Module) -> Result<bool> {
    Ok(shared_scc(m1, m2)?.is_some())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Groups components connected through hidden atoms.
///
/// `components` are the input-free SCCs `D_1..D_m`. Two components are
/// linked (symmetrically) when a hidden atom of one occurs, positively or
/// negatively, in the body of a rule with a head atom in the other. Returns
/// the connected groups `E_1..E_k` as lists of component positions, each
/// sorted, ordered by their first member.
pub fn dep_h(m: &Module, components: &[AtomSet]) -> Vec<Vec<usize>> {
    let comp_of: HashMap<Atom, usize> = components
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&a| (a, i)))
        .collect();
    let mut uf = UnionFind::new(components.len());
    for r in m.rules() {
        for a in r.body_atoms().filter(|a| m.hidden().contains(a)) {
            let Some(&ca) = comp_of.get(&a) else { continue };
            for h in r.heads() {
                if let Some(&ch) = comp_of.get(h) {
                    uf.union(ca, ch);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..components.len() {
        let root = uf.find(i);
        let g = *slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// Default cap on the size of a positive SCC whose subsets are enumerated.
pub const DEFAULT_LOOP_CAP: usize = 20;

/// All loops of the positive dependency graph of `rules`: non-empty sets
/// `L` whose induced subgraph is strongly connected by paths of non-zero
/// length. A singleton `{a}` is a loop iff `a → a`.
pub fn loops(rules: &[Rule], cap: usize) -> Result<Vec<AtomSet>> {
    let g = DepGraph::from_rules(&AtomSet::new(), rules, DepMode::Positive);
    let mut out: BTreeSet<AtomSet> = BTreeSet::new();
    for comp in tarjan(g.successors()) {
        let k = comp.len();
        if k == 1 {
            let v = comp[0];
            if g.succ[v as usize].binary_search(&v).is_ok() {
                out.insert([g.vertices[v as usize]].into_iter().collect());
            }
            continue;
        }
        if k > cap || k > 63 {
            return Err(Error::cap("loop enumeration (positive SCC size)", k, cap.min(63)));
        }
        let local: HashMap<u32, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut fwd = vec![0u64; k];
        let mut bwd = vec![0u64; k];
        for (i, &v) in comp.iter().enumerate() {
            for w in &g.succ[v as usize] {
                if let Some(&j) = local.get(w) {
                    fwd[i] |= 1 << j;
                    bwd[j] |= 1 << i;
                }
            }
        }
        let reach = |start: usize, subset: u64, adj: &[u64]| -> u64 {
            let mut seen = 1u64 << start;
            let mut frontier = seen;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let i = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= adj[i] & subset;
                }
                frontier = next & !seen;
                seen |= next;
            }
            seen
        };
        for subset in 1u64..(1u64 << k) {
            let start = subset.trailing_zeros() as usize;
            let is_loop = if subset.count_ones() == 1 {
                fwd[start] & subset != 0
            } else {
                reach(start, subset, &fwd) & subset == subset && reach(start, subset, &bwd) & subset == subset
            };
            if is_loop {
                out.insert(
                    (0..k)
                        .filter(|i| subset >> i & 1 == 1)
                        .map(|i| g.vertices[comp[i] as usize])
                        .collect(),
                );
            }
        }
    }
    Ok(out.into_iter().collect())
}
