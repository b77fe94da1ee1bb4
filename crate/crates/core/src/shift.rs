//! Finitely presented subshifts.
//!
//! A presentation is a finite directed graph with symbol-labelled edges. Its
//! subshift is the set of label sequences of infinite forward paths. Labels sit
//! on edges, so a word of length `n + 1` is read along a path of `n + 1`
//! edges.
//!
//! Presentations are kept pruned: every vertex has an outgoing edge, so every
//! finite path extends to an infinite one and every word read off the graph
//! really occurs in the subshift.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::symbol::{sym, Symbol, VertexId, Word};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub label: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubshiftPresentation {
    vertices: BTreeSet<VertexId>,
    alphabet: BTreeSet<Symbol>,
    edges: BTreeSet<Edge>,
}

impl SubshiftPresentation {
    /// Validate and prune.
    pub fn new(vertices: BTreeSet<VertexId>, alphabet: BTreeSet<Symbol>, edges: BTreeSet<Edge>) -> Result<Self> {
        for e in &edges {
            for v in [&e.from, &e.to] {
                if !vertices.contains(v) {
                    return Err(Error::Format(format!("edge endpoint {v} is not a vertex")));
                }
            }
            if !alphabet.contains(&e.label) {
                return Err(Error::AlphabetMismatch(format!("edge label {} is not in the alphabet", e.label)));
            }
        }
        let mut p = SubshiftPresentation { vertices, alphabet, edges };
        p.prune();
        Ok(p)
    }

    pub fn empty(alphabet: BTreeSet<Symbol>) -> Self {
        SubshiftPresentation { alphabet, ..Default::default() }
    }

    /// Vertices `u`, `v`; edges `u→u:0`, `u→v:1`, `v→u:0`. Binary sequences
    /// with no two consecutive 1s.
    pub fn golden_mean() -> Self {
        let u = VertexId::new("u").unwrap();
        let v = VertexId::new("v").unwrap();
        let edge = |from: &VertexId, to: &VertexId, l: &str| Edge { from: from.clone(), to: to.clone(), label: sym(l) };
        Self::new(
            [u.clone(), v.clone()].into(),
            [sym("0"), sym("1")].into(),
            [edge(&u, &u, "0"), edge(&u, &v, "1"), edge(&v, &u, "0")].into(),
        )
        .unwrap()
    }

    /// One vertex with a loop per symbol.
    pub fn full_shift(alphabet: BTreeSet<Symbol>) -> Self {
        let o = VertexId::new("o").unwrap();
        let edges = alphabet.iter().map(|l| Edge { from: o.clone(), to: o.clone(), label: l.clone() }).collect();
        let vertices = if alphabet.is_empty() { BTreeSet::new() } else { [o].into() };
        Self::new(vertices, alphabet, edges).unwrap()
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Repeatedly drop vertices without outgoing edges, with their in-edges.
    fn prune(&mut self) {
        loop {
            let live: BTreeSet<&VertexId> = self.edges.iter().map(|e| &e.from).collect();
            let dead: Vec<VertexId> = self.vertices.iter().filter(|v| !live.contains(v)).cloned().collect();
            if dead.is_empty() {
                return;
            }
            for v in &dead {
                self.vertices.remove(v);
            }
            self.edges.retain(|e| self.vertices.contains(&e.to));
        }
    }

    /// Outgoing edges per vertex as (label, target index), vertices indexed in
    /// sorted order.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(&Symbol, usize)>> {
        let index: BTreeMap<&VertexId, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[index[&e.from]].push((&e.label, index[&e.to]));
        }
        adj
    }

    /// Label words of all paths with `n + 1` edges.
    pub fn words(&self, n: usize) -> BTreeSet<Word> {
        self.words_up_to(n).pop().unwrap_or_default()
    }

    /// `[words(0), words(1), …, words(depth)]`, sharing the path expansion.
    pub fn words_up_to(&self, depth: usize) -> Vec<BTreeSet<Word>> {
        let adj = self.adjacency();
        let mut frontier: BTreeSet<(Vec<Symbol>, usize)> = BTreeSet::new();
        for out in &adj {
            for &(l, to) in out {
                frontier.insert((vec![l.clone()], to));
            }
        }
        let mut levels = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            if n > 0 {
                let mut next = BTreeSet::new();
                for (w, v) in &frontier {
                    for &(l, to) in &adj[*v] {
                        let mut w2 = w.clone();
                        w2.push(l.clone());
                        next.insert((w2, to));
                    }
                }
                frontier = next;
            }
            levels.push(frontier.iter().map(|(w, _)| Word::from_slice(w)).collect());
        }
        levels
    }

    /// Some path carries the label sequence `w`.
    pub fn contains_word(&self, w: &Word) -> bool {
        let adj = self.adjacency();
        let mut current: BTreeSet<usize> = (0..adj.len()).collect();
        for s in w.symbols() {
            current = current.iter().flat_map(|&v| adj[v].iter().filter(|(l, _)| *l == s).map(|&(_, to)| to)).collect();
            if current.is_empty() {
                return false;
            }
        }
        true
    }

    /// `words(self, n) ⊆ words(other, n)` for every `n ≤ depth`.
    pub fn language_within(&self, other: &SubshiftPresentation, depth: usize) -> bool {
        let mine = self.words_up_to(depth);
        let theirs = other.words_up_to(depth);
        mine.iter().zip(&theirs).all(|(a, b)| a.is_subset(b))
    }

    pub fn same_language(&self, other: &SubshiftPresentation, depth: usize) -> bool {
        self.words_up_to(depth) == other.words_up_to(depth)
    }
}
