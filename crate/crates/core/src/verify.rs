//! Certificate-based verification of the approximation guarantees.
//!
//! For a run that produced a maximal matching `M` and a degree-bounded
//! cross-edge collection `B`, this module rebuilds the fractional matching
//! that justifies the size bound, entirely in exact arithmetic over
//! `a + b*sqrt(2)` numbers:
//!
//! * every `M` edge carries `2 - sqrt 2`;
//! * every `B` edge outside the reference optimum carries its multiplicity
//!   (clipped, in the dynamic variant) divided by the free-side capacity;
//! * every `B` edge that *is* an optimum edge carries `t / ceil(k*b)`,
//!   where `t` exhausts the smaller of its two endpoints' residual
//!   capacities after the previous step.
//!
//! Three checks follow. [`check_claims`] verifies the mass lower bounds
//! (enough weight on `M`, on `B`, and in total, relative to the optimum
//! split). [`check_blossom`] verifies the odd-set constraints
//! `(1-eps) * x(S) <= floor(|S|/2)` for small odd sets, exhaustively on
//! small support components and by bounded cycle search plus seeded random
//! connected sets on large ones. [`check_value_caps`] verifies the
//! per-class value bounds that the dynamic estimator's analysis leans on.
//! A fractional matching that passes vertex feasibility and the odd-set
//! constraints witnesses (after `(1-eps)` scaling) a lower bound on the
//! maximum matching size, so these checks certify outputs without trusting
//! the algorithm that produced them.

use crate::exact::maximum_matching;
use crate::fractional::{FractionalError, FractionalMatching};
use crate::graph::{Edge, Graph, VertexId};
use crate::matching::{BMatching, Matching};
use crate::numeric::{rat_to_f64, Epsilon, Q2, Rat};
use crate::twopass::StreamParams;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("matching is not maximal: optimum edge ({0}, {1}) has no covered endpoint")]
    NotMaximal(VertexId, VertexId),
    #[error(transparent)]
    Fractional(#[from] FractionalError),
}

/// A maximum matching of the graph, split by how each of its edges meets
/// the vertices covered by the maintained matching: `m1` edges touch
/// exactly one covered vertex, `m2` edges touch two.
#[derive(Clone, Debug)]
pub struct OptSplit {
    pub m_star: Matching,
    pub m1: Vec<Edge>,
    pub m2: Vec<Edge>,
}

impl OptSplit {
    pub fn mu(&self) -> usize {
        self.m_star.len()
    }
}

pub fn split_optimum(g: &Graph, m: &Matching) -> Result<OptSplit, VerifyError> {
    let m_star = maximum_matching(g).matching;
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for e in m_star.edges() {
        match (m.is_covered(e.u()), m.is_covered(e.v())) {
            (true, true) => m2.push(e),
            (false, false) => return Err(VerifyError::NotMaximal(e.u(), e.v())),
            _ => m1.push(e),
        }
    }
    Ok(OptSplit { m_star, m1, m2 })
}

/// How much integer mass a non-optimum `B` edge contributes before the
/// division by the free-side capacity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightRule {
    /// One unit per distinct stored edge (streaming pipeline, where `B` is
    /// a set).
    UnitPerEdge,
    /// The edge's multiplicity, clipped at `eps^3 * ceil(k*b)` (dynamic
    /// pipeline, where `B` is a multiset induced by the copy matching).
    CappedPerCopy,
}

/// Rebuild the fractional certificate for a run's `(M, B)` pair against a
/// reference optimum split.
pub fn build_fractional(
    m: &Matching,
    b: &BMatching,
    split: &OptSplit,
    params: &StreamParams,
    rule: WeightRule,
) -> Result<FractionalMatching, VerifyError> {
    let n = m.n();
    let kb = Rat::from_integer(params.kb_ceil as i128);
    let k = Rat::from_integer(params.k as i128);
    let clip = params.epsilon.rat().pow(3) * kb;
    let m1set: BTreeSet<Edge> = split.m1.iter().copied().collect();
    let mut x = FractionalMatching::new(n);
    let mut tsum: Vec<Rat> = vec![Rat::zero(); n];

    // Non-optimum B edges first; their integer mass t is what the optimum
    // edges' residuals are measured against.
    for (e, mult) in b.edges() {
        if m1set.contains(&e) {
            continue;
        }
        let t = match rule {
            WeightRule::UnitPerEdge => Rat::one().min(Rat::from_integer(mult as i128)),
            WeightRule::CappedPerCopy => clip.min(Rat::from_integer(mult as i128)),
        };
        tsum[e.u()] += t;
        tsum[e.v()] += t;
        x.set(e, Q2::rational(t / kb))?;
    }
    // Optimum edges stored in B: exhaust the smaller residual. Optimum
    // edges are vertex-disjoint, so these assignments never interact and
    // their order is immaterial.
    for &e in &split.m1 {
        if !b.contains(e) {
            continue;
        }
        let (cov, free) = if m.is_covered(e.u()) {
            (e.u(), e.v())
        } else {
            (e.v(), e.u())
        };
        let t = (k - tsum[cov]).min(kb - tsum[free]);
        debug_assert!(t >= Rat::zero());
        x.set(e, Q2::rational(t / kb))?;
    }
    for e in m.edges() {
        x.set(e, Q2::pass1_weight())?;
    }
    Ok(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimCheck {
    pub label: &'static str,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub checks: Vec<ClaimCheck>,
}

impl ClaimReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn claim(label: &'static str, lhs: Q2, rhs: Q2) -> ClaimCheck {
    ClaimCheck {
        label,
        holds: lhs >= rhs,
        lhs: lhs.to_f64(),
        rhs: rhs.to_f64(),
    }
}

/// The three mass lower bounds, decided in exact arithmetic. `lhs`/`rhs`
/// are float renderings for reports.
pub fn check_claims(
    x: &FractionalMatching,
    m: &Matching,
    b: &BMatching,
    split: &OptSplit,
    params: &StreamParams,
) -> ClaimReport {
    let one_minus_eps = Q2::rational(Rat::one() - params.epsilon.rat());
    let half = Q2::rational(Rat::new(1, 2));
    let mut x_m = Q2::zero();
    for e in m.edges() {
        x_m += x.get(e);
    }
    let mut x_b = Q2::zero();
    for (e, _) in b.edges() {
        x_b += x.get(e);
    }
    let m1 = Q2::from_int(split.m1.len() as i128);
    let m2 = Q2::from_int(split.m2.len() as i128);
    let mu = Q2::from_int(split.mu() as i128);
    let w = Q2::pass1_weight();
    let checks = vec![
        claim("mass_on_pass1", x_m, w * (m2 + half * m1)),
        claim("mass_on_pass2", x_b, one_minus_eps * half * w * m1),
        claim("total_mass", x.total(), one_minus_eps * w * mu),
    ];
    ClaimReport { checks }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlossomViolation {
    pub vertices: Vec<VertexId>,
    pub x_value: f64,
    pub scaled: f64,
    pub bound: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BlossomReport {
    pub sets_checked: u64,
    pub cycles_checked: u64,
    pub samples_checked: u64,
    pub violations: Vec<BlossomViolation>,
}

impl BlossomReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Components up to this many vertices get all their odd subsets checked.
const EXHAUSTIVE_COMPONENT: usize = 16;
/// Weight threshold above which an edge takes part in the cycle search.
const HIGH_WEIGHT_NUM: i128 = 1;
const HIGH_WEIGHT_DEN: i128 = 4;
const CYCLE_VISIT_BUDGET: u64 = 1_000_000;
const SAMPLED_SETS: usize = 400;
const SAMPLE_SEED: u64 = 0xb105_50;

/// Check the odd-set constraints `(1-eps) * x(S) <= floor(|S|/2)` for odd
/// sets smaller than `1/eps` (or an explicit size cap).
///
/// Coverage strategy: a violating odd set may be assumed connected in the
/// support graph and contained in one component (cross-component mass
/// splits into per-part constraints that are individually no weaker).
/// Small components are enumerated exhaustively; large ones are probed by
/// odd-cycle search restricted to heavy edges plus seeded random connected
/// odd sets. Every verdict is computed exactly.
pub fn check_blossom(
    x: &FractionalMatching,
    eps: Epsilon,
    size_cap: Option<usize>,
) -> BlossomReport {
    let limit = size_cap.unwrap_or_else(|| eps.odd_set_limit());
    let mut report = BlossomReport::default();
    if limit < 3 {
        // Size-1 sets have no inner edges; nothing can violate.
        return report;
    }
    let one_minus_eps = Q2::rational(Rat::one() - eps.rat());

    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (e, _) in x.support() {
        adj.entry(e.u()).or_default().push(e.v());
        adj.entry(e.v()).or_default().push(e.u());
    }
    for l in adj.values_mut() {
        l.sort_unstable();
        l.dedup();
    }

    // Connected components of the support graph.
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut components: Vec<Vec<VertexId>> = Vec::new();
    for &s in adj.keys() {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = vec![];
        let mut queue = VecDeque::from([s]);
        seen.insert(s);
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &w in &adj[&u] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }

    let check_set = |verts: &[VertexId], report: &mut BlossomReport| {
        debug_assert!(verts.len() % 2 == 1);
        let xs = x.inner_weight(verts);
        let bound = (verts.len() / 2) as u64;
        let scaled = one_minus_eps * xs;
        if scaled > Q2::from_int(bound as i128) {
            report.violations.push(BlossomViolation {
                vertices: verts.to_vec(),
                x_value: xs.to_f64(),
                scaled: scaled.to_f64(),
                bound,
            });
        }
    };

    let mut large: Vec<&Vec<VertexId>> = Vec::new();
    for comp in &components {
        if comp.len() > EXHAUSTIVE_COMPONENT {
            large.push(comp);
            continue;
        }
        // All odd subsets of the component, sizes 3..=limit.
        let nbits = comp.len() as u32;
        for mask in 1u32..(1u32 << nbits) {
            let pop = mask.count_ones() as usize;
            if pop % 2 == 0 || pop < 3 || pop > limit {
                continue;
            }
            let verts: Vec<VertexId> = (0..nbits)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| comp[i as usize])
                .collect();
            report.sets_checked += 1;
            check_set(&verts, &mut report);
        }
    }

    if large.is_empty() {
        return report;
    }

    // Heavy-edge subgraph for the cycle search.
    let threshold = Q2::rational(Rat::new(HIGH_WEIGHT_NUM, HIGH_WEIGHT_DEN));
    let mut heavy: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (e, w) in x.support() {
        if w >= threshold {
            heavy.entry(e.u()).or_default().push(e.v());
            heavy.entry(e.v()).or_default().push(e.u());
        }
    }
    for l in heavy.values_mut() {
        l.sort_unstable();
        l.dedup();
    }
    let mut budget = CYCLE_VISIT_BUDGET;
    let starts: Vec<VertexId> = heavy.keys().copied().collect();
    for &s in &starts {
        if budget == 0 {
            break;
        }
        odd_cycles_from(
            s,
            &heavy,
            limit,
            &mut budget,
            &mut |cycle: &[VertexId]| {
                report.cycles_checked += 1;
                check_set(cycle, &mut report);
            },
        );
    }

    // Seeded random connected odd sets inside large components.
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let pool: Vec<VertexId> = large.iter().flat_map(|c| c.iter().copied()).collect();
    if !pool.is_empty() {
        for _ in 0..SAMPLED_SETS {
            let start = pool[rng.random_range(0..pool.len())];
            let max_odd = limit | 1;
            let target = 3 + 2 * rng.random_range(0..=(max_odd.saturating_sub(3)) / 2);
            let mut set: Vec<VertexId> = vec![start];
            let mut in_set: HashSet<VertexId> = HashSet::from([start]);
            while set.len() < target {
                let u = set[rng.random_range(0..set.len())];
                let cands: Vec<VertexId> = adj[&u]
                    .iter()
                    .copied()
                    .filter(|w| !in_set.contains(w))
                    .collect();
                let Some(&w) = cands.get(rng.random_range(0..cands.len().max(1))) else {
                    break;
                };
                set.push(w);
                in_set.insert(w);
            }
            if set.len() % 2 == 1 && set.len() >= 3 {
                set.sort_unstable();
                report.samples_checked += 1;
                check_set(&set, &mut report);
            }
        }
    }
    report
}

/// Enumerate odd simple cycles through `s` (as minimum vertex) of length
/// at most `limit`, spending at most `budget` DFS visits.
fn odd_cycles_from(
    s: VertexId,
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    limit: usize,
    budget: &mut u64,
    found: &mut impl FnMut(&[VertexId]),
) {
    let mut path = vec![s];
    let mut on_path: HashSet<VertexId> = HashSet::from([s]);
    cycle_dfs(s, adj, limit, budget, &mut path, &mut on_path, found);
}

fn cycle_dfs(
    s: VertexId,
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    limit: usize,
    budget: &mut u64,
    path: &mut Vec<VertexId>,
    on_path: &mut HashSet<VertexId>,
    found: &mut impl FnMut(&[VertexId]),
) {
    if *budget == 0 {
        return;
    }
    *budget -= 1;
    let u = *path.last().expect("path nonempty");
    for &w in &adj[&u] {
        if w == s && path.len() >= 3 {
            // Close the cycle; report odd ones once per orientation.
            if path.len() % 2 == 1 && path[1] < *path.last().expect("len >= 3") {
                found(path);
            }
            continue;
        }
        if w <= s || on_path.contains(&w) || path.len() + 1 > limit {
            continue;
        }
        path.push(w);
        on_path.insert(w);
        cycle_dfs(s, adj, limit, budget, path, on_path, found);
        on_path.remove(&w);
        path.pop();
        if *budget == 0 {
            return;
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CapReport {
    pub issues: Vec<String>,
}

impl CapReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Per-class value bounds on the certificate: exactly `2 - sqrt 2` on `M`,
/// at most `sqrt 2 - 1` on stored optimum edges, and (dynamic rule) at
/// most `eps^3` — or (streaming rule) exactly `1/ceil(k*b)` — on the rest
/// of `B`.
pub fn check_value_caps(
    x: &FractionalMatching,
    m: &Matching,
    b: &BMatching,
    split: &OptSplit,
    params: &StreamParams,
    rule: WeightRule,
) -> CapReport {
    let mut report = CapReport::default();
    let m1set: BTreeSet<Edge> = split.m1.iter().copied().collect();
    let w_m = Q2::pass1_weight();
    for e in m.edges() {
        if x.get(e) != w_m {
            report
                .issues
                .push(format!("matching edge {e:?} carries {} instead of 2 - sqrt 2", x.get(e)));
        }
    }
    let unit = Q2::rational(Rat::new(1, params.kb_ceil as i128));
    let eps3 = Q2::rational(params.epsilon.rat().pow(3));
    let stored_opt_cap = Q2::new(Rat::from_integer(-1), Rat::one()); // sqrt 2 - 1
    for (e, _) in b.edges() {
        let w = x.get(e);
        if m1set.contains(&e) {
            if w > stored_opt_cap {
                report
                    .issues
                    .push(format!("stored optimum edge {e:?} carries {w} > sqrt 2 - 1"));
            }
        } else {
            match rule {
                WeightRule::UnitPerEdge => {
                    if w != unit {
                        report.issues.push(format!(
                            "stored edge {e:?} carries {w}, expected 1/{}",
                            params.kb_ceil
                        ));
                    }
                }
                WeightRule::CappedPerCopy => {
                    if w > eps3 {
                        report.issues.push(format!(
                            "stored edge {e:?} carries {w} > eps^3 = {}",
                            rat_to_f64(params.epsilon.rat().pow(3))
                        ));
                    }
                }
            }
        }
    }
    report
}
