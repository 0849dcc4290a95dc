//! Maximal matching under edge insertions and deletions.
//!
//! Each update costs at most one neighbor scan per endpoint: an inserted
//! edge is taken iff both ends are free; deleting a matched edge frees its
//! two endpoints, and each of them greedily re-matches to its smallest free
//! neighbor. Every other vertex keeps its matched status, which is what the
//! sampling estimator relies on between queries.

use crate::graph::{Graph, VertexId};
use crate::matching::Matching;

#[derive(Clone, Debug)]
pub struct MaximalState {
    m: Matching,
}

impl MaximalState {
    pub fn new(n: usize) -> Self {
        MaximalState { m: Matching::new(n) }
    }

    /// Greedy maximal matching of a static graph, edges in lexicographic
    /// order.
    pub fn from_graph(g: &Graph) -> Self {
        let mut st = MaximalState::new(g.n());
        for e in g.edges() {
            if !st.m.is_covered(e.u()) && !st.m.is_covered(e.v()) {
                st.m.add(e.u(), e.v()).expect("both endpoints free");
            }
        }
        st
    }

    pub fn matching(&self) -> &Matching {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Call after `(u, v)` was inserted into the graph.
    pub fn on_insert(&mut self, _g: &Graph, u: VertexId, v: VertexId) {
        if !self.m.is_covered(u) && !self.m.is_covered(v) {
            self.m.add(u, v).expect("both endpoints free");
        }
    }

    /// Call after `(u, v)` was deleted from the graph. If the edge was
    /// matched, both endpoints try to re-match, smaller id first, each to
    /// its smallest free neighbor.
    pub fn on_delete(&mut self, g: &Graph, u: VertexId, v: VertexId) {
        if !self.m.contains_edge(u, v) {
            return;
        }
        self.m.remove(u, v).expect("checked matched");
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.repair(g, a);
        self.repair(g, b);
    }

    fn repair(&mut self, g: &Graph, v: VertexId) {
        if self.m.is_covered(v) {
            return;
        }
        for w in g.neighbors(v) {
            if !self.m.is_covered(w) {
                self.m.add(v, w).expect("both endpoints free");
                return;
            }
        }
    }

    /// Full-scan maximality check (test and audit use only).
    pub fn is_maximal(&self, g: &Graph) -> bool {
        g.edges()
            .all(|e| self.m.is_covered(e.u()) || self.m.is_covered(e.v()))
    }
}
