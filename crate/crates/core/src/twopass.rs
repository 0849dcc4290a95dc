//! Two-pass streaming matching.
//!
//! Pass one greedily builds a maximal matching `M` while the edges fly by.
//! Pass two only looks at *cross* edges — one endpoint covered by `M`, the
//! other free — and admits each distinct cross edge into a degree-bounded
//! subgraph `B`: a covered vertex may take up to `k` such edges, a free
//! vertex up to `ceil(k * (1 + sqrt 2))`. The answer is an exact maximum
//! matching of the small union graph `M ∪ B`.
//!
//! With `k` derived from the accuracy knob ε the final size is at least
//! `(1-ε)^3 * (2 - sqrt 2)` times the optimum, and never worse than the
//! maximal matching's half-of-optimum.

use crate::exact::{maximum_matching, MatchingResult};
use crate::graph::{Edge, Graph, GraphError};
use crate::matching::{BMatching, Matching};
use crate::numeric::{kb_ceil_for, Epsilon};
use crate::stream::UpdateStream;
use thiserror::Error;

/// Size knobs for the second pass.
#[derive(Clone, Copy, Debug)]
pub struct StreamParams {
    pub epsilon: Epsilon,
    pub k: u64,
    pub kb_ceil: u64,
}

impl StreamParams {
    /// Derive `k = ceil((sqrt 2 - 1) / ε³)` from the accuracy knob.
    pub fn new(epsilon: Epsilon) -> Self {
        let k = epsilon.default_k();
        StreamParams {
            epsilon,
            k,
            kb_ceil: kb_ceil_for(k),
        }
    }

    /// Same ε but an explicit capacity; the free-side capacity follows.
    pub fn with_k(epsilon: Epsilon, k: u64) -> Self {
        StreamParams {
            epsilon,
            k: k.max(1),
            kb_ceil: kb_ceil_for(k.max(1)),
        }
    }
}

/// Greedy maximal matching over an edge sequence: take an edge iff both
/// endpoints are still free.
pub fn pass1_maximal(n: usize, edges: impl IntoIterator<Item = Edge>) -> Matching {
    let mut m = Matching::new(n);
    for e in edges {
        if !m.is_covered(e.u()) && !m.is_covered(e.v()) {
            m.add(e.u(), e.v()).expect("both endpoints checked free");
        }
    }
    m
}

/// Degree-bounded cross-edge collection. Edges with both endpoints covered
/// or both free are ignored; each distinct cross edge is admitted at most
/// once, and only while both endpoints have residual capacity.
pub fn pass2_bmatching(
    n: usize,
    edges: impl IntoIterator<Item = Edge>,
    m: &Matching,
    params: &StreamParams,
) -> BMatching {
    let caps: Vec<u64> = (0..n)
        .map(|v| if m.is_covered(v) { params.k } else { params.kb_ceil })
        .collect();
    let mut b = BMatching::new(caps);
    for e in edges {
        if m.is_covered(e.u()) == m.is_covered(e.v()) {
            continue;
        }
        if b.contains(e) {
            continue;
        }
        if b.residual(e.u()) > 0 && b.residual(e.v()) > 0 {
            b.try_add(e.u(), e.v(), 1).expect("residuals checked");
        }
    }
    b
}

/// Union graph of the two passes' output, the only part of the input the
/// algorithm retains.
pub fn union_graph(n: usize, m: &Matching, b: &BMatching) -> Result<Graph, GraphError> {
    let mut g = Graph::new(n);
    for e in m.edges() {
        g.insert_edge(e.u(), e.v())?;
    }
    for (e, _) in b.edges() {
        if !g.has_edge(e.u(), e.v()) {
            g.insert_edge(e.u(), e.v())?;
        }
    }
    Ok(g)
}

/// Exact maximum matching of `M ∪ B`.
pub fn finalize(n: usize, m: &Matching, b: &BMatching) -> MatchingResult {
    let g = union_graph(n, m, b).expect("union of valid edges");
    maximum_matching(&g)
}

#[derive(Clone, Debug)]
pub struct TwoPassOutput {
    pub pass1: Matching,
    pub pass2: BMatching,
    pub final_matching: Matching,
    pub size: usize,
}

impl TwoPassOutput {
    /// Number of edges the algorithm ever stored.
    pub fn stored_edges(&self) -> usize {
        self.pass1.len() + self.pass2.distinct_edge_count()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwoPassError {
    #[error("two-pass matching needs an insert-only stream (event {index} is a deletion)")]
    MixedStream { index: usize },
}

/// Run both passes over an insert-only stream and finish exactly. Query
/// events are skipped; deletions are an error.
pub fn run_two_pass(
    stream: &UpdateStream,
    params: &StreamParams,
) -> Result<TwoPassOutput, TwoPassError> {
    if let Some(index) = stream
        .events
        .iter()
        .position(|e| matches!(e, crate::stream::UpdateEvent::Delete(_, _)))
    {
        return Err(TwoPassError::MixedStream { index });
    }
    Ok(run_two_pass_edges(stream.n, stream.insert_sequence(), params))
}

/// Same, for an in-memory edge sequence (replayed once per pass).
pub fn run_two_pass_edges(n: usize, edges: Vec<Edge>, params: &StreamParams) -> TwoPassOutput {
    let pass1 = pass1_maximal(n, edges.iter().copied());
    let pass2 = pass2_bmatching(n, edges.iter().copied(), &pass1, params);
    let fin = finalize(n, &pass1, &pass2);
    let size = fin.size;
    TwoPassOutput {
        pass1,
        pass2,
        final_matching: fin.matching,
        size,
    }
}
