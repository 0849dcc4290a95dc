//! Exact maximum matching, used as the yardstick for every approximation
//! ratio in the crate.
//!
//! The solver is petgraph's blossom-based `maximum_matching`; vertices are
//! handed over in id order and the algorithm is deterministic, so the
//! returned matching (not just its size) is reproducible. An independent
//! brute-force solver over tiny graphs guards it in tests.

use crate::graph::{Edge, Graph};
use crate::matching::Matching;
use petgraph::graph::{NodeIndex, UnGraph};
use thiserror::Error;

#[derive(Clone, Debug)]
pub struct MatchingResult {
    pub matching: Matching,
    pub size: usize,
}

/// Maximum matching of a general graph.
pub fn maximum_matching(g: &Graph) -> MatchingResult {
    let mut pg = UnGraph::<(), ()>::with_capacity(g.n(), g.edge_count());
    for _ in 0..g.n() {
        pg.add_node(());
    }
    for e in g.edges() {
        pg.add_edge(NodeIndex::new(e.u()), NodeIndex::new(e.v()), ());
    }
    let pm = petgraph::algo::matching::maximum_matching(&pg);
    let mut matching = Matching::new(g.n());
    for (a, b) in pm.edges() {
        matching
            .add(a.index(), b.index())
            .expect("solver returned a valid matching");
    }
    let size = matching.len();
    MatchingResult { matching, size }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BruteForceError {
    #[error("graph too large for exhaustive matching ({n} vertices, limit {limit})")]
    TooLarge { n: usize, limit: usize },
}

const BRUTE_FORCE_LIMIT: usize = 16;

/// Maximum matching size by exhaustive search with simple pruning; only for
/// graphs with at most 16 vertices.
pub fn brute_force_matching(g: &Graph) -> Result<usize, BruteForceError> {
    if g.n() > BRUTE_FORCE_LIMIT {
        return Err(BruteForceError::TooLarge {
            n: g.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let edges: Vec<Edge> = g.edges().collect();
    let n = g.n();
    let mut best = 0usize;
    rec(&edges, 0, 0u32, 0, n, &mut best);
    Ok(best)
}

fn rec(edges: &[Edge], i: usize, used: u32, cur: usize, n: usize, best: &mut usize) {
    if cur > *best {
        *best = cur;
    }
    if i == edges.len() {
        return;
    }
    let free = n - used.count_ones() as usize;
    let bound = cur + (edges.len() - i).min(free / 2);
    if bound <= *best {
        return;
    }
    let e = edges[i];
    let mask = (1u32 << e.u()) | (1u32 << e.v());
    if used & mask == 0 {
        rec(edges, i + 1, used | mask, cur + 1, n, best);
    }
    rec(edges, i + 1, used, cur, n, best);
}

/// Validity check: every matched edge must exist in the graph.
pub fn matching_uses_graph_edges(g: &Graph, m: &Matching) -> bool {
    m.edges().iter().all(|e| g.has_edge(e.u(), e.v()))
}
