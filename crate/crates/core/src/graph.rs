//! Undirected simple graph over a fixed vertex set `0..n`, with the update
//! operations the dynamic algorithms need. Adjacency is kept in ordered sets
//! so every enumeration in the crate is deterministic.

use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

/// Dense vertex index; always `< n` for the graph it belongs to.
pub type VertexId = usize;

/// Undirected edge in canonical form: the smaller endpoint first.
/// Serializes as a two-element array `[u, v]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    /// Canonicalizes the endpoint order. Panics on a self-loop; loops are
    /// rejected with a typed error at every ingestion point before this runs.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "self-loop has no canonical edge form");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(&self) -> VertexId {
        self.0
    }

    pub fn v(&self) -> VertexId {
        self.1
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        debug_assert!(w == self.0 || w == self.1);
        if w == self.0 {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.0 == w || self.1 == w
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) not present")]
    MissingEdge(VertexId, VertexId),
}

/// Simple undirected graph with O(log deg) insert/delete and sorted
/// neighbor iteration.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<VertexId>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    fn check_pair(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        if self.adj[u].contains(&v) {
            let e = Edge::new(u, v);
            return Err(GraphError::DuplicateEdge(e.u(), e.v()));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.m += 1;
        Ok(())
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        if !self.adj[u].contains(&v) {
            let e = Edge::new(u, v);
            return Err(GraphError::MissingEdge(e.u(), e.v()));
        }
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        self.m -= 1;
        Ok(())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.adj[u].len()
    }

    /// Neighbors in ascending order.
    pub fn neighbors(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[u].iter().copied()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .range(u + 1..)
                .map(move |&v| Edge::new(u, v))
        })
    }

    /// View of the bipartite subgraph induced between a vertex class and its
    /// complement; keeps only edges crossing the split and materializes
    /// nothing.
    pub fn induced_bipartite_view<'g, F>(&'g self, in_left: F) -> BipartiteView<'g, F>
    where
        F: Fn(VertexId) -> bool,
    {
        BipartiteView { g: self, in_left }
    }
}

/// Lazy cross-class view produced by [`Graph::induced_bipartite_view`].
pub struct BipartiteView<'g, F> {
    g: &'g Graph,
    in_left: F,
}

impl<'g, F> BipartiteView<'g, F>
where
    F: Fn(VertexId) -> bool,
{
    pub fn is_left(&self, u: VertexId) -> bool {
        (self.in_left)(u)
    }

    /// Neighbors of `u` on the opposite side of the split, ascending.
    pub fn cross_neighbors(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let side = (self.in_left)(u);
        self.g
            .neighbors(u)
            .filter(move |&w| (self.in_left)(w) != side)
    }

    pub fn cross_degree(&self, u: VertexId) -> usize {
        self.cross_neighbors(u).count()
    }
}
