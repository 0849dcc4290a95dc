//! Fractional matchings with exact weights.
//!
//! Weights live in Q(sqrt 2) because the certificate construction assigns
//! `2 - sqrt(2)` to some edges and small rationals to the rest; per-vertex
//! feasibility can then sit exactly on the boundary `sum = 1`, which is why
//! the comparison has to be exact rather than floating point.

use crate::graph::{Edge, VertexId};
use crate::numeric::Q2;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FractionalError {
    #[error("negative weight on edge ({0}, {1})")]
    NegativeWeight(VertexId, VertexId),
    #[error("vertex {v} out of range (n = {n})")]
    OutOfRange { v: VertexId, n: usize },
    #[error("fractional mass at vertex {0} exceeds 1")]
    VertexOverloaded(VertexId),
}

/// Edge-weight assignment `x` with `x_e >= 0`; a valid fractional matching
/// additionally keeps `sum of x_e over edges at v` at most 1 for every `v`,
/// which [`FractionalMatching::validate`] checks exactly.
#[derive(Clone, Debug, Default)]
pub struct FractionalMatching {
    n: usize,
    x: BTreeMap<Edge, Q2>,
    // Per-vertex incident support with weights, for O(deg) vertex sums.
    inc: Vec<BTreeMap<VertexId, Q2>>,
}

impl FractionalMatching {
    pub fn new(n: usize) -> Self {
        FractionalMatching {
            n,
            x: BTreeMap::new(),
            inc: vec![BTreeMap::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sets the weight of an edge (overwrites any previous value).
    pub fn set(&mut self, e: Edge, w: Q2) -> Result<(), FractionalError> {
        if e.v() >= self.n {
            return Err(FractionalError::OutOfRange {
                v: e.v(),
                n: self.n,
            });
        }
        if w.is_negative() {
            return Err(FractionalError::NegativeWeight(e.u(), e.v()));
        }
        self.x.insert(e, w);
        self.inc[e.u()].insert(e.v(), w);
        self.inc[e.v()].insert(e.u(), w);
        Ok(())
    }

    /// Weight of an edge; zero when the edge is outside the support.
    pub fn get(&self, e: Edge) -> Q2 {
        self.x.get(&e).copied().unwrap_or_else(Q2::zero)
    }

    /// Exact sum of incident weights at `v`.
    pub fn vertex_sum(&self, v: VertexId) -> Q2 {
        let mut s = Q2::zero();
        for w in self.inc[v].values() {
            s += *w;
        }
        s
    }

    /// Exact total weight.
    pub fn total(&self) -> Q2 {
        let mut s = Q2::zero();
        for w in self.x.values() {
            s += *w;
        }
        s
    }

    /// Support edges (nonzero weight) in canonical order.
    pub fn support(&self) -> impl Iterator<Item = (Edge, Q2)> + '_ {
        self.x
            .iter()
            .filter(|(_, w)| **w != Q2::zero())
            .map(|(e, w)| (*e, *w))
    }

    pub fn support_len(&self) -> usize {
        self.support().count()
    }

    /// Checks per-vertex feasibility exactly.
    pub fn validate(&self) -> Result<(), FractionalError> {
        for v in 0..self.n {
            if self.vertex_sum(v) > Q2::one() {
                return Err(FractionalError::VertexOverloaded(v));
            }
        }
        Ok(())
    }

    /// Exact weight of the edge set inside a vertex set `s`:
    /// `sum of x_e over edges with both endpoints in s`.
    pub fn inner_weight(&self, s: &[VertexId]) -> Q2 {
        let mut total = Q2::zero();
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                if let Some(w) = self.inc[u.min(v)].get(&u.max(v)) {
                    total += *w;
                }
            }
        }
        total
    }
}
