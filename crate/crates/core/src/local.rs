//! Query-local matching over the union of the maintained maximal matching
//! and the oracle's degree-bounded subgraph.
//!
//! The reference procedure over any edge set is [`bounded_augmentation`]:
//! a lexicographically greedy maximal matching, then phases that eliminate
//! augmenting paths of length 3, 5, ... up to a bound, always taking the
//! lexicographically first path from the smallest augmentable free vertex
//! and rescanning from scratch after each augmentation. Augmentations never
//! cross connected components and rescans exhaust smaller components
//! independently of larger ones, so the procedure is component-
//! decomposable: running it on one component yields exactly its restriction
//! to that component.
//!
//! [`LocalMatcher`] exploits that: to answer "is vertex v matched?", it
//! discovers v's connected component in the union graph through oracle
//! queries, runs the procedure on that component alone, and caches the
//! result. Answers across any sequence of queries are therefore mutually
//! consistent — they all restrict one well-defined global matching, which
//! is what makes downstream size estimates trustworthy on both sides.
//! Components are explored in full (with a safety cap) rather than
//! truncated at a fixed radius, because truncation can flip an answer on
//! long thin components.

use crate::graph::{Edge, VertexId};
use crate::matching::Matching;
use crate::rgmm::{OracleError, RgmmOracle};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use thiserror::Error;

#[derive(Clone, Copy, Debug)]
pub struct LocalParams {
    /// Longest augmenting-path length eliminated (odd).
    pub l_max: usize,
    /// Exploration radius for ball-style probes.
    pub d: usize,
    /// Hard cap on component size during discovery.
    pub component_cap: usize,
}

pub const DEFAULT_COMPONENT_CAP: usize = 100_000;

impl LocalParams {
    pub fn new(l_max: usize, d: usize) -> Self {
        LocalParams {
            l_max: l_max.max(1),
            d,
            component_cap: DEFAULT_COMPONENT_CAP,
        }
    }

    /// Phase bound `2 * ceil(1/eps) - 1` and a matching exploration radius.
    pub fn from_epsilon(eps: crate::numeric::Epsilon) -> Self {
        let l = eps.aug_length_limit();
        LocalParams::new(l, l + 1)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("connected component exceeds exploration cap ({size} vertices, cap {cap})")]
    ComponentTooLarge { size: usize, cap: usize },
}

/// Breadth-first ball of a given radius around a center, over an arbitrary
/// fallible neighborhood function.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: VertexId,
    pub radius: usize,
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<Edge>,
}

pub fn explore_ball<E>(
    center: VertexId,
    radius: usize,
    mut neighbors: impl FnMut(VertexId) -> Result<Vec<VertexId>, E>,
) -> Result<Ball, E> {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut dist: HashMap<VertexId, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    vertices.insert(center);
    dist.insert(center, 0);
    queue.push_back(center);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == radius {
            continue;
        }
        for w in neighbors(u)? {
            edges.insert(Edge::new(u, w));
            if !dist.contains_key(&w) {
                dist.insert(w, du + 1);
                vertices.insert(w);
                queue.push_back(w);
            }
        }
    }
    Ok(Ball {
        center,
        radius,
        vertices,
        edges,
    })
}

/// Greedy maximal matching plus bounded augmentation phases over an
/// explicit edge set. Deterministic; returns the mate map.
pub fn bounded_augmentation(edges: &BTreeSet<Edge>, max_len: usize) -> BTreeMap<VertexId, VertexId> {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.u()).or_default().push(e.v());
        adj.entry(e.v()).or_default().push(e.u());
    }
    for l in adj.values_mut() {
        l.sort_unstable();
        l.dedup();
    }
    let mut mate: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for e in edges {
        if !mate.contains_key(&e.u()) && !mate.contains_key(&e.v()) {
            mate.insert(e.u(), e.v());
            mate.insert(e.v(), e.u());
        }
    }
    let mut phase = 3;
    while phase <= max_len {
        'rescan: loop {
            let free: Vec<VertexId> = adj
                .keys()
                .filter(|v| !mate.contains_key(v))
                .copied()
                .collect();
            for &v in &free {
                if let Some(path) = lex_first_augmenting_path(&adj, &mate, v, phase) {
                    augment(&mut mate, &path);
                    continue 'rescan;
                }
            }
            break;
        }
        phase += 2;
    }
    mate
}

/// Lexicographically first alternating simple path from a free vertex to a
/// free vertex, at most `max_len` edges. Depth-first, neighbors ascending;
/// extending through a matched vertex consumes its matched edge (forced
/// step), so path parity is maintained by construction.
fn lex_first_augmenting_path(
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    mate: &BTreeMap<VertexId, VertexId>,
    start: VertexId,
    max_len: usize,
) -> Option<Vec<VertexId>> {
    let mut path = vec![start];
    let mut on_path: BTreeSet<VertexId> = BTreeSet::new();
    on_path.insert(start);
    if dfs(adj, mate, &mut path, &mut on_path, max_len) {
        Some(path)
    } else {
        None
    }
}

fn dfs(
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    mate: &BTreeMap<VertexId, VertexId>,
    path: &mut Vec<VertexId>,
    on_path: &mut BTreeSet<VertexId>,
    max_len: usize,
) -> bool {
    let u = *path.last().expect("path nonempty");
    let used = path.len() - 1;
    let Some(nbrs) = adj.get(&u) else { return false };
    for &w in nbrs {
        if on_path.contains(&w) || mate.get(&u) == Some(&w) {
            continue;
        }
        match mate.get(&w) {
            None => {
                // Unmatched edge to a free vertex completes the path.
                path.push(w);
                return true;
            }
            Some(&mw) => {
                if used + 2 > max_len - 1 || on_path.contains(&mw) {
                    continue;
                }
                path.push(w);
                path.push(mw);
                on_path.insert(w);
                on_path.insert(mw);
                if dfs(adj, mate, path, on_path, max_len) {
                    return true;
                }
                on_path.remove(&w);
                on_path.remove(&mw);
                path.pop();
                path.pop();
            }
        }
    }
    false
}

fn augment(mate: &mut BTreeMap<VertexId, VertexId>, path: &[VertexId]) {
    debug_assert!(path.len() >= 2 && path.len() % 2 == 0);
    let mut i = 1;
    while i + 1 < path.len() {
        mate.remove(&path[i]);
        mate.remove(&path[i + 1]);
        i += 2;
    }
    let mut i = 0;
    while i < path.len() {
        mate.insert(path[i], path[i + 1]);
        mate.insert(path[i + 1], path[i]);
        i += 2;
    }
}

/// Per-query local matching: discovers the queried vertex's component of
/// `M ∪ B` via oracle calls, matches it with [`bounded_augmentation`], and
/// memoizes per component.
pub struct LocalMatcher<'a, 'g> {
    oracle: &'a mut RgmmOracle<'g>,
    m: &'a Matching,
    params: LocalParams,
    known: HashMap<VertexId, Option<VertexId>>,
}

impl<'a, 'g> LocalMatcher<'a, 'g> {
    pub fn new(oracle: &'a mut RgmmOracle<'g>, m: &'a Matching, params: LocalParams) -> Self {
        LocalMatcher {
            oracle,
            m,
            params,
            known: HashMap::new(),
        }
    }

    /// Neighbors of `u` in the union graph `M ∪ B`, ascending, distinct.
    fn union_neighbors(&mut self, u: VertexId) -> Result<Vec<VertexId>, LocalError> {
        let mut out: Vec<VertexId> = self
            .oracle
            .b_edges_of(u)?
            .into_iter()
            .map(|(e, _)| e.other(u))
            .collect();
        if let Some(w) = self.m.mate(u) {
            out.push(w);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Matched status of `v` in the component-decomposed matching. All
    /// answers from one matcher restrict the same global matching.
    pub fn matched_status(&mut self, v: VertexId) -> Result<bool, LocalError> {
        if let Some(m) = self.known.get(&v) {
            return Ok(m.is_some());
        }
        let (vertices, edges) = self.discover_component(v)?;
        let mate = bounded_augmentation(&edges, self.params.l_max);
        for &u in &vertices {
            self.known.insert(u, mate.get(&u).copied());
        }
        Ok(self.known[&v].is_some())
    }

    /// Matched partner of `v`, when matched.
    pub fn matched_partner(&mut self, v: VertexId) -> Result<Option<VertexId>, LocalError> {
        self.matched_status(v)?;
        Ok(self.known[&v])
    }

    fn discover_component(
        &mut self,
        v: VertexId,
    ) -> Result<(BTreeSet<VertexId>, BTreeSet<Edge>), LocalError> {
        let cap = self.params.component_cap;
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut queue = VecDeque::new();
        vertices.insert(v);
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for w in self.union_neighbors(u)? {
                edges.insert(Edge::new(u, w));
                if vertices.insert(w) {
                    if vertices.len() > cap {
                        return Err(LocalError::ComponentTooLarge {
                            size: vertices.len(),
                            cap,
                        });
                    }
                    queue.push_back(w);
                }
            }
        }
        Ok((vertices, edges))
    }
}
