//! Oracle access to a greedy maximal matching over a *copy graph*, without
//! ever materializing it.
//!
//! Given the current graph and a maximal matching `M`, the copy graph blows
//! up every matched vertex into `k` copies and every free vertex into
//! `ceil(k * (1 + sqrt 2))` copies, and connects all copy pairs of every
//! *cross* edge (matched endpoint on one side, free endpoint on the other).
//! Each copy edge gets a pseudorandom rank from a keyed hash of its
//! identity; the object of interest is the greedy maximal matching obtained
//! by scanning copy edges in rank order.
//!
//! The pointwise characterization makes local access possible: a copy edge
//! is in that matching iff every adjacent copy edge of lower rank is *not*.
//! [`RgmmOracle::edge_in_gmm`] evaluates this recurrence lazily with
//! memoization and an exploration budget; [`RgmmOracle::is_matched`] and
//! [`RgmmOracle::b_edges_of`] are the derived per-vertex views. The
//! degree-bounded subgraph `B` induced on base vertices (edge multiplicity =
//! matched copy pairs) plays the same role as the second streaming pass, so
//! a matching of `M ∪ B` approximates the maximum matching while each query
//! touches only ranks it actually needs.

use crate::graph::{Edge, Graph, VertexId};
use crate::matching::{BMatching, Matching};
use crate::numeric::mix_seq;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use thiserror::Error;

/// One copy of a base vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexCopy {
    pub base: VertexId,
    pub idx: u32,
}

impl VertexCopy {
    pub fn new(base: VertexId, idx: u32) -> Self {
        VertexCopy { base, idx }
    }
}

/// An edge of the copy graph, endpoints in canonical order. Copies of the
/// same base vertex are never adjacent, so ordering by base is sound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CopyEdge {
    a: VertexCopy,
    b: VertexCopy,
}

impl CopyEdge {
    pub fn new(x: VertexCopy, y: VertexCopy) -> Self {
        assert_ne!(x.base, y.base, "copy edges connect distinct base vertices");
        if x.base < y.base {
            CopyEdge { a: x, b: y }
        } else {
            CopyEdge { a: y, b: x }
        }
    }

    pub fn a(&self) -> VertexCopy {
        self.a
    }

    pub fn b(&self) -> VertexCopy {
        self.b
    }

    /// The underlying edge of the base graph.
    pub fn base_edge(&self) -> Edge {
        Edge::new(self.a.base, self.b.base)
    }
}

/// A copy edge paired with its rank; the derived order (rank first, then
/// the canonical edge encoding) is the strict total order the greedy
/// matching scans in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RankedEdge {
    pub rank: u64,
    pub edge: CopyEdge,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exploration budget exhausted after {explored} copy-edge visits")]
    BudgetExceeded { explored: u64 },
    #[error("copy graph too large to materialize ({edges} copy edges, limit {limit})")]
    MaterializationTooLarge { edges: u64, limit: u64 },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OracleStats {
    /// Copy edges enumerated while building incidence lists.
    pub explored: u64,
    /// Public queries answered (edge, vertex, or per-base-vertex).
    pub calls: u64,
    /// Queries answered straight from a memo table.
    pub memo_hits: u64,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

pub struct RgmmOracle<'g> {
    g: &'g Graph,
    m: &'g Matching,
    k: u64,
    kb_ceil: u64,
    seed: u64,
    budget: u64,
    edge_memo: HashMap<CopyEdge, bool>,
    copy_memo: HashMap<VertexCopy, Option<CopyEdge>>,
    inc_cache: HashMap<VertexCopy, Rc<Vec<RankedEdge>>>,
    stats: OracleStats,
}

struct Frame {
    edge: CopyEdge,
    rank: u64,
    a_list: Rc<Vec<RankedEdge>>,
    b_list: Rc<Vec<RankedEdge>>,
    ai: usize,
    bi: usize,
}

enum Act {
    Done(bool),
    Recurse(CopyEdge),
}

impl<'g> RgmmOracle<'g> {
    pub fn new(g: &'g Graph, m: &'g Matching, k: u64, kb_ceil: u64, seed: u64) -> Self {
        Self::with_budget(g, m, k, kb_ceil, seed, DEFAULT_BUDGET)
    }

    pub fn with_budget(
        g: &'g Graph,
        m: &'g Matching,
        k: u64,
        kb_ceil: u64,
        seed: u64,
        budget: u64,
    ) -> Self {
        assert!(k >= 1 && kb_ceil >= k);
        RgmmOracle {
            g,
            m,
            k,
            kb_ceil,
            seed,
            budget,
            edge_memo: HashMap::new(),
            copy_memo: HashMap::new(),
            inc_cache: HashMap::new(),
            stats: OracleStats::default(),
        }
    }

    pub fn stats(&self) -> OracleStats {
        self.stats
    }

    /// Copy count of a base vertex under the current matching.
    pub fn cap(&self, v: VertexId) -> u64 {
        if self.m.is_covered(v) {
            self.k
        } else {
            self.kb_ceil
        }
    }

    pub fn rank_of(&self, e: CopyEdge) -> u64 {
        rank_of(self.seed, e)
    }

    fn charge(&mut self, units: u64) -> Result<(), OracleError> {
        self.stats.explored += units;
        if self.stats.explored > self.budget {
            return Err(OracleError::BudgetExceeded {
                explored: self.stats.explored,
            });
        }
        Ok(())
    }

    /// Incident copy edges of `vc`, ascending by (rank, edge).
    fn incident(&mut self, vc: VertexCopy) -> Result<Rc<Vec<RankedEdge>>, OracleError> {
        if let Some(l) = self.inc_cache.get(&vc) {
            return Ok(l.clone());
        }
        let covered = self.m.is_covered(vc.base);
        let mut list = Vec::new();
        for w in self.g.neighbors(vc.base) {
            if self.m.is_covered(w) == covered {
                continue;
            }
            let cw = self.cap(w);
            self.charge(cw)?;
            for j in 0..cw {
                let e = CopyEdge::new(vc, VertexCopy::new(w, j as u32));
                list.push(RankedEdge {
                    rank: rank_of(self.seed, e),
                    edge: e,
                });
            }
        }
        list.sort_unstable();
        let rc = Rc::new(list);
        self.inc_cache.insert(vc, rc.clone());
        Ok(rc)
    }

    fn make_frame(&mut self, e: CopyEdge) -> Result<Frame, OracleError> {
        let a_list = self.incident(e.a)?;
        let b_list = self.incident(e.b)?;
        Ok(Frame {
            edge: e,
            rank: rank_of(self.seed, e),
            a_list,
            b_list,
            ai: 0,
            bi: 0,
        })
    }

    /// Is this copy edge in the rank-order greedy maximal matching?
    ///
    /// Iterative evaluation of: `e` is matched iff no adjacent copy edge of
    /// strictly lower (rank, edge) is matched. A parent frame waits while a
    /// child candidate resolves; verdicts flow back through the memo table.
    pub fn edge_in_gmm(&mut self, e: CopyEdge) -> Result<bool, OracleError> {
        self.stats.calls += 1;
        if let Some(&r) = self.edge_memo.get(&e) {
            self.stats.memo_hits += 1;
            return Ok(r);
        }
        let mut stack = vec![self.make_frame(e)?];
        while !stack.is_empty() {
            let act = {
                let top = stack.last_mut().expect("stack nonempty");
                let bound = (top.rank, top.edge);
                loop {
                    let ca = top.a_list.get(top.ai).copied();
                    let cb = top.b_list.get(top.bi).copied();
                    let (cand, from_a) = match (ca, cb) {
                        (None, None) => break Act::Done(true),
                        (Some(x), None) => (x, true),
                        (None, Some(y)) => (y, false),
                        (Some(x), Some(y)) => {
                            if x <= y {
                                (x, true)
                            } else {
                                (y, false)
                            }
                        }
                    };
                    if (cand.rank, cand.edge) >= bound {
                        break Act::Done(true);
                    }
                    match self.edge_memo.get(&cand.edge) {
                        Some(&true) => break Act::Done(false),
                        Some(&false) => {
                            if from_a {
                                top.ai += 1;
                            } else {
                                top.bi += 1;
                            }
                        }
                        None => break Act::Recurse(cand.edge),
                    }
                }
            };
            match act {
                Act::Done(verdict) => {
                    let cur = stack.pop().expect("stack nonempty").edge;
                    self.record_edge_verdict(cur, verdict);
                }
                Act::Recurse(c) => {
                    let f = self.make_frame(c)?;
                    stack.push(f);
                }
            }
        }
        Ok(self.edge_memo[&e])
    }

    fn record_edge_verdict(&mut self, e: CopyEdge, verdict: bool) {
        self.edge_memo.insert(e, verdict);
        if verdict {
            self.copy_memo.insert(e.a, Some(e));
            self.copy_memo.insert(e.b, Some(e));
        }
    }

    /// Matched partner of a vertex copy in the greedy matching, if any.
    pub fn is_matched(&mut self, vc: VertexCopy) -> Result<Option<CopyEdge>, OracleError> {
        debug_assert!((vc.idx as u64) < self.cap(vc.base));
        self.stats.calls += 1;
        if let Some(&r) = self.copy_memo.get(&vc) {
            self.stats.memo_hits += 1;
            return Ok(r);
        }
        let list = self.incident(vc)?;
        for re in list.iter() {
            if self.edge_in_gmm(re.edge)? {
                return Ok(Some(re.edge));
            }
        }
        self.copy_memo.insert(vc, None);
        Ok(None)
    }

    /// Induced degree-bounded edges at a base vertex: each matched copy of
    /// `v` contributes one unit of multiplicity to its base edge. Result is
    /// ascending by neighbor.
    pub fn b_edges_of(&mut self, v: VertexId) -> Result<Vec<(Edge, u64)>, OracleError> {
        let mut agg: BTreeMap<Edge, u64> = BTreeMap::new();
        for i in 0..self.cap(v) {
            if let Some(ce) = self.is_matched(VertexCopy::new(v, i as u32))? {
                *agg.entry(ce.base_edge()).or_insert(0) += 1;
            }
        }
        Ok(agg.into_iter().collect())
    }
}

pub fn rank_of(seed: u64, e: CopyEdge) -> u64 {
    mix_seq(
        seed,
        &[
            e.a.base as u64,
            e.a.idx as u64,
            e.b.base as u64,
            e.b.idx as u64,
        ],
    )
}

pub const MATERIALIZE_LIMIT: u64 = 1_000_000;

/// The same greedy maximal matching, computed whole: every copy edge is
/// materialized, sorted by (rank, edge), and scanned greedily. Reference
/// implementation for tests and small-instance verification.
pub fn global_gmm(
    g: &Graph,
    m: &Matching,
    k: u64,
    kb_ceil: u64,
    seed: u64,
) -> Result<BTreeMap<VertexCopy, VertexCopy>, OracleError> {
    let cap = |v: VertexId| if m.is_covered(v) { k } else { kb_ceil };
    let mut total: u64 = 0;
    let mut all: Vec<RankedEdge> = Vec::new();
    for e in g.edges() {
        if m.is_covered(e.u()) == m.is_covered(e.v()) {
            continue;
        }
        let (cu, cv) = (cap(e.u()), cap(e.v()));
        total += cu * cv;
        if total > MATERIALIZE_LIMIT {
            return Err(OracleError::MaterializationTooLarge {
                edges: total,
                limit: MATERIALIZE_LIMIT,
            });
        }
        for i in 0..cu {
            for j in 0..cv {
                let ce = CopyEdge::new(
                    VertexCopy::new(e.u(), i as u32),
                    VertexCopy::new(e.v(), j as u32),
                );
                all.push(RankedEdge {
                    rank: rank_of(seed, ce),
                    edge: ce,
                });
            }
        }
    }
    all.sort_unstable();
    let mut mate: BTreeMap<VertexCopy, VertexCopy> = BTreeMap::new();
    for re in all {
        let (a, b) = (re.edge.a, re.edge.b);
        if !mate.contains_key(&a) && !mate.contains_key(&b) {
            mate.insert(a, b);
            mate.insert(b, a);
        }
    }
    Ok(mate)
}

/// Collapse a copy-level matching into base-edge multiplicities.
pub fn b_multiset_from_gmm(mate: &BTreeMap<VertexCopy, VertexCopy>) -> BTreeMap<Edge, u64> {
    let mut out = BTreeMap::new();
    for (a, b) in mate.iter() {
        if a < b {
            *out.entry(Edge::new(a.base, b.base)).or_insert(0) += 1;
        }
    }
    out
}

/// The induced multiset as a capacity-checked degree-bounded subgraph.
pub fn b_matching_from_gmm(
    n: usize,
    m: &Matching,
    k: u64,
    kb_ceil: u64,
    mate: &BTreeMap<VertexCopy, VertexCopy>,
) -> BMatching {
    let caps: Vec<u64> = (0..n)
        .map(|v| if m.is_covered(v) { k } else { kb_ceil })
        .collect();
    let mut b = BMatching::new(caps);
    for (e, mult) in b_multiset_from_gmm(mate) {
        b.try_add(e.u(), e.v(), mult)
            .expect("copy matching respects copy counts");
    }
    b
}
