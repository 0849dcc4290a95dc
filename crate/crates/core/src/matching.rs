//! Integral matchings and capacitated (b-)matchings.

use crate::graph::{Edge, VertexId};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("vertex {0} is already matched")]
    EndpointUsed(VertexId),
    #[error("edge ({0}, {1}) is not in the matching")]
    PairNotMatched(VertexId, VertexId),
    #[error("vertex {v} out of range (n = {n})")]
    OutOfRange { v: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
}

/// Matching stored as a mate table; the involution `mate(mate(v)) = v` holds
/// by construction since both directions are written together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<VertexId>>,
    size: usize,
}

impl Matching {
    pub fn new(n: usize) -> Self {
        Matching {
            mate: vec![None; n],
            size: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    /// Number of matched edges.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate[v]
    }

    pub fn is_covered(&self, v: VertexId) -> bool {
        self.mate[v].is_some()
    }

    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.mate.len() && self.mate[u] == Some(v)
    }

    fn check(&self, u: VertexId, v: VertexId) -> Result<(), MatchingError> {
        let n = self.mate.len();
        if u >= n {
            return Err(MatchingError::OutOfRange { v: u, n });
        }
        if v >= n {
            return Err(MatchingError::OutOfRange { v, n });
        }
        if u == v {
            return Err(MatchingError::SelfLoop(u));
        }
        Ok(())
    }

    pub fn add(&mut self, u: VertexId, v: VertexId) -> Result<(), MatchingError> {
        self.check(u, v)?;
        if self.mate[u].is_some() {
            return Err(MatchingError::EndpointUsed(u));
        }
        if self.mate[v].is_some() {
            return Err(MatchingError::EndpointUsed(v));
        }
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
        self.size += 1;
        Ok(())
    }

    pub fn remove(&mut self, u: VertexId, v: VertexId) -> Result<(), MatchingError> {
        self.check(u, v)?;
        if self.mate[u] != Some(v) {
            let e = Edge::new(u, v);
            return Err(MatchingError::PairNotMatched(e.u(), e.v()));
        }
        self.mate[u] = None;
        self.mate[v] = None;
        self.size -= 1;
        Ok(())
    }

    /// Matched edges in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.size);
        for (u, m) in self.mate.iter().enumerate() {
            if let Some(v) = *m {
                if u < v {
                    out.push(Edge::new(u, v));
                }
            }
        }
        out
    }

    /// Vertices covered by the matching, ascending.
    pub fn covered_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.map(|_| u))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BMatchingError {
    #[error("capacity {cap} at vertex {v} would be exceeded")]
    CapacityExceeded { v: VertexId, cap: u64 },
    #[error("vertex {v} out of range (n = {n})")]
    OutOfRange { v: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
}

/// Capacitated multigraph matching: each vertex `v` carries at most `cap(v)`
/// edge endpoints, and parallel copies of an edge are counted with
/// multiplicity.
#[derive(Clone, Debug)]
pub struct BMatching {
    cap: Vec<u64>,
    deg: Vec<u64>,
    // neighbor -> multiplicity, one map per vertex; both directions kept.
    inc: Vec<BTreeMap<VertexId, u64>>,
    distinct: usize,
    total: u64,
}

impl BMatching {
    pub fn new(cap: Vec<u64>) -> Self {
        let n = cap.len();
        BMatching {
            cap,
            deg: vec![0; n],
            inc: vec![BTreeMap::new(); n],
            distinct: 0,
            total: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.cap.len()
    }

    pub fn cap(&self, v: VertexId) -> u64 {
        self.cap[v]
    }

    /// Sum of multiplicities at `v`.
    pub fn deg(&self, v: VertexId) -> u64 {
        self.deg[v]
    }

    pub fn residual(&self, v: VertexId) -> u64 {
        self.cap[v] - self.deg[v]
    }

    pub fn multiplicity(&self, e: Edge) -> u64 {
        self.inc[e.u()].get(&e.v()).copied().unwrap_or(0)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.multiplicity(e) > 0
    }

    /// Number of distinct edges with nonzero multiplicity.
    pub fn distinct_edge_count(&self) -> usize {
        self.distinct
    }

    /// Sum of all multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.total
    }

    fn check(&self, u: VertexId, v: VertexId) -> Result<(), BMatchingError> {
        let n = self.cap.len();
        if u >= n {
            return Err(BMatchingError::OutOfRange { v: u, n });
        }
        if v >= n {
            return Err(BMatchingError::OutOfRange { v, n });
        }
        if u == v {
            return Err(BMatchingError::SelfLoop(u));
        }
        Ok(())
    }

    /// Adds `count` copies of the edge, refusing if either endpoint would
    /// exceed its capacity.
    pub fn try_add(&mut self, u: VertexId, v: VertexId, count: u64) -> Result<(), BMatchingError> {
        self.check(u, v)?;
        if self.deg[u] + count > self.cap[u] {
            return Err(BMatchingError::CapacityExceeded {
                v: u,
                cap: self.cap[u],
            });
        }
        if self.deg[v] + count > self.cap[v] {
            return Err(BMatchingError::CapacityExceeded {
                v,
                cap: self.cap[v],
            });
        }
        if count == 0 {
            return Ok(());
        }
        let prev = self.inc[u].entry(v).or_insert(0);
        if *prev == 0 {
            self.distinct += 1;
        }
        *prev += count;
        *self.inc[v].entry(u).or_insert(0) += count;
        self.deg[u] += count;
        self.deg[v] += count;
        self.total += count;
        Ok(())
    }

    /// Distinct edges with their multiplicities, in canonical edge order.
    pub fn edges(&self) -> Vec<(Edge, u64)> {
        let mut out = Vec::with_capacity(self.distinct);
        for u in 0..self.inc.len() {
            for (&v, &c) in self.inc[u].range(u + 1..) {
                if c > 0 {
                    out.push((Edge::new(u, v), c));
                }
            }
        }
        out
    }

    /// Incident distinct edges of `v` with multiplicities, neighbor-ascending.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = (Edge, u64)> + '_ {
        self.inc[v]
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(move |(&w, &c)| (Edge::new(v, w), c))
    }
}
