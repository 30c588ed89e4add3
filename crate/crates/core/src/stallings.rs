//! Stallings graphs of finitely generated subgroups of free groups.
//!
//! Folding a wedge of labelled loops yields the deterministic core whose
//! cycle rank is the free rank of the subgroup. A list of `n` words then
//! defines an injective map from the free group of rank `n` exactly when the
//! folded graph has rank `n`, since free groups are Hopfian.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::freegroup::{Sign, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("no words given")]
    Empty,
    #[error("rank mismatch: graph over rank {graph}, word over rank {word}")]
    RankMismatch { graph: usize, word: usize },
    #[error("graph is not folded")]
    NotFolded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    rank: usize,
    base: usize,
    num_vertices: usize,
    edges: Vec<Edge>,
}

impl Serialize for SubgroupGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SubgroupGraph", 2)?;
        st.serialize_field("base", &self.base)?;
        let edges: Vec<[usize; 3]> = self.edges.iter().map(|e| [e.from, e.to, e.label]).collect();
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

impl SubgroupGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// No vertex has two outgoing, or two incoming, edges with one label.
    pub fn is_folded(&self) -> bool {
        let mut out = HashMap::new();
        let mut inn = HashMap::new();
        for e in &self.edges {
            if out.insert((e.from, e.label), e.to).is_some() || inn.insert((e.to, e.label), e.from).is_some() {
                return false;
            }
        }
        true
    }

    /// Cycle rank `E - V + 1`; only meaningful for folded graphs.
    pub fn subgroup_rank(&self) -> Result<usize, GraphError> {
        if !self.is_folded() {
            return Err(GraphError::NotFolded);
        }
        Ok(self.edges.len() + 1 - self.num_vertices)
    }

    /// Does `w` read a closed path at the base vertex?
    pub fn contains(&self, w: &Word) -> Result<bool, GraphError> {
        if w.rank() != self.rank {
            return Err(GraphError::RankMismatch { graph: self.rank, word: w.rank() });
        }
        if !self.is_folded() {
            return Err(GraphError::NotFolded);
        }
        let mut out = HashMap::new();
        let mut inn = HashMap::new();
        for e in &self.edges {
            out.insert((e.from, e.label), e.to);
            inn.insert((e.to, e.label), e.from);
        }
        let mut at = self.base;
        for l in w.letters() {
            let next = match l.sign {
                Sign::Plus => out.get(&(at, l.generator)),
                Sign::Minus => inn.get(&(at, l.generator)),
            };
            match next {
                Some(&v) => at = v,
                None => return Ok(false),
            }
        }
        Ok(at == self.base)
    }

    /// Renumber vertices breadth-first from the base, visiting outgoing
    /// edges by label and then incoming edges by label. Two folded graphs
    /// are isomorphic (fixing the base) iff their canonical forms are equal.
    pub fn canonical(&self) -> SubgroupGraph {
        let mut out: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut inn: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for e in &self.edges {
            out.entry((e.from, e.label)).or_default().push(e.to);
            inn.entry((e.to, e.label)).or_default().push(e.from);
        }
        for list in out.values_mut().chain(inn.values_mut()) {
            list.sort_unstable();
        }
        let mut new_id = vec![usize::MAX; self.num_vertices];
        let mut queue = VecDeque::from([self.base]);
        new_id[self.base] = 0;
        let mut next = 1;
        while let Some(v) = queue.pop_front() {
            for map in [&out, &inn] {
                for label in 0..self.rank {
                    for &u in map.get(&(v, label)).into_iter().flatten() {
                        if new_id[u] == usize::MAX {
                            new_id[u] = next;
                            next += 1;
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| new_id[e.from] != usize::MAX)
            .map(|e| Edge { from: new_id[e.from], to: new_id[e.to], label: e.label })
            .collect();
        edges.sort_unstable_by_key(|e| (e.from, e.label, e.to));
        edges.dedup();
        SubgroupGraph {
            rank: self.rank,
            base: 0,
            num_vertices: next,
            edges,
        }
    }
}

/// Wedge of one labelled loop per word at the base vertex `0`.
pub fn graph_from_words(words: &[Word]) -> Result<SubgroupGraph, GraphError> {
    let rank = words.first().ok_or(GraphError::Empty)?.rank();
    let mut num_vertices = 1;
    let mut edges = Vec::new();
    for w in words {
        if w.rank() != rank {
            return Err(GraphError::RankMismatch { graph: rank, word: w.rank() });
        }
        let n = w.len();
        let mut at = 0;
        for (i, l) in w.letters().iter().enumerate() {
            let to = if i + 1 == n {
                0
            } else {
                num_vertices += 1;
                num_vertices - 1
            };
            edges.push(match l.sign {
                Sign::Plus => Edge { from: at, to, label: l.generator },
                Sign::Minus => Edge { from: to, to: at, label: l.generator },
            });
            at = to;
        }
    }
    Ok(SubgroupGraph { rank, base: 0, num_vertices, edges })
}

type Slots = Vec<Vec<Option<usize>>>;

fn link(adj: &mut Slots, v: usize, slot: usize, t: usize, work: &mut Vec<(usize, usize)>) {
    match adj[v][slot] {
        Some(t2) => work.push((t, t2)),
        None => adj[v][slot] = Some(t),
    }
}

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }
}

/// Fold with union-find and a worklist of label clashes; the result is in
/// canonical form.
pub fn fold(g: &SubgroupGraph) -> SubgroupGraph {
    let slots = 2 * g.rank;
    // adj[v][2*label] = some out-neighbour, adj[v][2*label+1] = some in-neighbour
    let mut adj: Slots = vec![vec![None; slots]; g.num_vertices];
    let mut work: Vec<(usize, usize)> = Vec::new();
    for e in &g.edges {
        link(&mut adj, e.from, 2 * e.label, e.to, &mut work);
        link(&mut adj, e.to, 2 * e.label + 1, e.from, &mut work);
    }
    let mut dsu = Dsu::new(g.num_vertices);
    while let Some((a, b)) = work.pop() {
        let (mut keep, mut gone) = (dsu.find(a), dsu.find(b));
        if keep == gone {
            continue;
        }
        if dsu.size[keep] < dsu.size[gone] {
            std::mem::swap(&mut keep, &mut gone);
        }
        dsu.parent[gone] = keep;
        dsu.size[keep] += dsu.size[gone];
        let moved = std::mem::take(&mut adj[gone]);
        for (slot, t) in moved.into_iter().enumerate() {
            if let Some(t) = t {
                link(&mut adj, keep, slot, t, &mut work);
            }
        }
    }
    let mut edges = Vec::new();
    for v in 0..g.num_vertices {
        if dsu.find(v) != v {
            continue;
        }
        for label in 0..g.rank {
            if let Some(t) = adj[v][2 * label] {
                edges.push(Edge { from: v, to: dsu.find(t), label });
            }
        }
    }
    SubgroupGraph {
        rank: g.rank,
        base: dsu.find(g.base),
        num_vertices: g.num_vertices,
        edges,
    }
    .canonical()
}

/// Fold one elementary identification at a time, choosing each clash at
/// random. Quadratic; meant as an independent route for checking [`fold`].
pub fn fold_in_order<R: Rng + ?Sized>(g: &SubgroupGraph, rng: &mut R) -> SubgroupGraph {
    let mut edges: Vec<Edge> = g.edges.clone();
    let mut base = g.base;
    edges.shuffle(rng);
    loop {
        edges.sort_unstable();
        edges.dedup();
        let mut clashes: Vec<(usize, usize)> = Vec::new();
        let mut out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut inn: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &edges {
            if let Some(&t) = out.get(&(e.from, e.label)) {
                clashes.push((t, e.to));
            } else {
                out.insert((e.from, e.label), e.to);
            }
            if let Some(&s) = inn.get(&(e.to, e.label)) {
                clashes.push((s, e.from));
            } else {
                inn.insert((e.to, e.label), e.from);
            }
        }
        let Some(&(u, v)) = clashes.choose(rng) else {
            break;
        };
        let (keep, gone) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        for e in edges.iter_mut() {
            if e.from == gone {
                e.from = keep;
            }
            if e.to == gone {
                e.to = keep;
            }
        }
        if base == gone {
            base = keep;
        }
    }
    SubgroupGraph {
        rank: g.rank,
        base,
        num_vertices: g.num_vertices,
        edges,
    }
    .canonical()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphWitness {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub injective: bool,
    pub rank: usize,
    pub words: usize,
    pub witness: GraphWitness,
}

/// The words define an injective map from the free group on `words.len()`
/// letters iff they generate a subgroup of that rank.
pub fn certify_injective(words: &[Word]) -> Result<InjectivityVerdict, GraphError> {
    let folded = fold(&graph_from_words(words)?);
    let rank = folded.subgroup_rank()?;
    Ok(InjectivityVerdict {
        injective: rank == words.len(),
        rank,
        words: words.len(),
        witness: GraphWitness {
            vertices: folded.num_vertices(),
            edges: folded.edges().len(),
        },
    })
}

/// Kill generators `keep..` and reduce: the retraction onto the first
/// `keep` free factors.
pub fn retract(w: &Word, keep: usize) -> Result<Word, WordError> {
    if keep > w.rank() {
        return Err(WordError::RankMismatch { left: w.rank(), right: keep });
    }
    Word::reduce(w.letters().iter().copied().filter(|l| l.generator < keep), keep)
}
