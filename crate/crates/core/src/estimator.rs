//! Matching-size estimation by vertex sampling.
//!
//! A query samples `r = clamp(ceil(24 ln n / eps^2), 1, n)` vertices with
//! replacement, asks the component-local matcher whether each is matched in
//! the union of the maintained maximal matching and the oracle's
//! degree-bounded subgraph, and converts the matched count `X` into
//!
//! ```text
//! mu_tilde = n * X / (2 r) - eps * n / 2,   clamped into [0, n/2]
//! ```
//!
//! The subtraction absorbs sampling error one-sidedly, so the reported
//! value stays below the true maximum matching size (with high
//! probability) while remaining above a constant fraction of it, minus the
//! additive `eps * n` slack.
//!
//! Between queries the driver [`run_fully_dynamic`] applies edge updates to
//! the maximal matching (constant repair work per update) and only
//! re-estimates on explicit query events or every so-many updates; a
//! maximal matching moves by at most one edge per update, so the staleness
//! of a carried estimate is bounded by the requery interval.

use crate::exact::maximum_matching;
use crate::graph::Graph;
use crate::local::{LocalMatcher, LocalParams};
use crate::matching::Matching;
use crate::maximal::MaximalState;
use crate::numeric::{kb_ceil_for, mix_seq, Epsilon};
use crate::rgmm::{RgmmOracle, DEFAULT_BUDGET};
use crate::stream::{UpdateEvent, UpdateStream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug)]
pub struct EstimatorConfig {
    pub epsilon: Epsilon,
    pub k: u64,
    pub kb_ceil: u64,
    pub local: LocalParams,
    pub budget: u64,
    pub seed: u64,
    /// Updates between fresh estimates; `None` derives it from the last
    /// estimate (`max(1, floor(eps * mu_tilde))`).
    pub requery_interval: Option<usize>,
}

impl EstimatorConfig {
    pub fn new(epsilon: Epsilon, seed: u64) -> Self {
        let k = epsilon.default_k();
        EstimatorConfig {
            epsilon,
            k,
            kb_ceil: kb_ceil_for(k),
            local: LocalParams::from_epsilon(epsilon),
            budget: DEFAULT_BUDGET,
            seed,
            requery_interval: None,
        }
    }

    /// Override the per-matched-vertex copy count (the free-side capacity
    /// follows).
    pub fn with_k(mut self, k: u64) -> Self {
        self.k = k.max(1);
        self.kb_ceil = kb_ceil_for(self.k);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_requery_interval(mut self, interval: usize) -> Self {
        self.requery_interval = Some(interval.max(1));
        self
    }
}

/// Number of samples for an `n`-vertex graph.
pub fn sample_count(n: usize, eps: Epsilon) -> usize {
    if n == 0 {
        return 0;
    }
    let raw = (24.0 * (n as f64).ln() / (eps.to_f64() * eps.to_f64())).ceil();
    (raw as usize).clamp(1, n)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub mu_tilde: f64,
    pub matched_samples: u64,
    pub r: usize,
    pub explored_edges: u64,
    /// True when the oracle ran out of exploration budget; affected samples
    /// counted as unmatched, so the estimate leans low.
    pub budget_exhausted: bool,
}

impl Estimate {
    fn zero() -> Self {
        Estimate {
            mu_tilde: 0.0,
            matched_samples: 0,
            r: 0,
            explored_edges: 0,
            budget_exhausted: false,
        }
    }
}

/// One sampling round against the current graph and maximal matching.
/// `epoch` decouples the sampling and rank randomness of successive
/// queries under one configured seed.
pub fn query(g: &Graph, m: &Matching, cfg: &EstimatorConfig, epoch: u64) -> Estimate {
    let n = g.n();
    if n == 0 {
        return Estimate::zero();
    }
    let r = sample_count(n, cfg.epsilon);
    let rank_seed = mix_seq(cfg.seed, &[epoch, 1]);
    let sample_seed = mix_seq(cfg.seed, &[epoch, 2]);
    let mut oracle = RgmmOracle::with_budget(g, m, cfg.k, cfg.kb_ceil, rank_seed, cfg.budget);
    let mut budget_exhausted = false;
    let mut matched = 0u64;
    {
        let mut matcher = LocalMatcher::new(&mut oracle, m, cfg.local);
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
        for _ in 0..r {
            let v = rng.random_range(0..n);
            match matcher.matched_status(v) {
                Ok(true) => matched += 1,
                Ok(false) => {}
                Err(_) => budget_exhausted = true,
            }
        }
    }
    let eps = cfg.epsilon.to_f64();
    let raw = n as f64 * matched as f64 / (2.0 * r as f64) - eps * n as f64 / 2.0;
    let mu_tilde = raw.clamp(0.0, n as f64 / 2.0);
    Estimate {
        mu_tilde,
        matched_samples: matched,
        r,
        explored_edges: oracle.stats().explored,
        budget_exhausted,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Insert,
    Delete,
    Query,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::Insert => "insert",
            StepKind::Delete => "delete",
            StepKind::Query => "query",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StepRecord {
    pub event_index: usize,
    pub kind: StepKind,
    pub mu_tilde: f64,
    pub matched_samples: u64,
    pub r: usize,
    pub explored_edges: u64,
    pub budget_exhausted: bool,
    /// Whether this row's estimate was computed at this event (as opposed
    /// to carried forward from the last fresh one).
    pub fresh: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_exact: Option<usize>,
}

/// Replay an update stream, maintaining the maximal matching throughout
/// and estimating on query events, on the first event, and every requery
/// interval. With `with_exact`, every record also carries the true maximum
/// matching size (slow; meant for evaluation on small inputs).
pub fn run_fully_dynamic(
    stream: &UpdateStream,
    cfg: &EstimatorConfig,
    with_exact: bool,
) -> Vec<StepRecord> {
    let mut g = Graph::new(stream.n);
    let mut st = MaximalState::new(stream.n);
    let mut records = Vec::with_capacity(stream.events.len());
    let mut last: Option<Estimate> = None;
    let mut updates_since = 0usize;
    let mut epoch = 0u64;
    for (i, ev) in stream.events.iter().enumerate() {
        let kind = match *ev {
            UpdateEvent::Insert(u, v) => {
                g.insert_edge(u, v).expect("stream validated at ingestion");
                st.on_insert(&g, u, v);
                updates_since += 1;
                StepKind::Insert
            }
            UpdateEvent::Delete(u, v) => {
                g.delete_edge(u, v).expect("stream validated at ingestion");
                st.on_delete(&g, u, v);
                updates_since += 1;
                StepKind::Delete
            }
            UpdateEvent::Query => StepKind::Query,
        };
        let interval = cfg.requery_interval.unwrap_or_else(|| {
            let stale = last.map(|e| e.mu_tilde).unwrap_or(0.0);
            ((cfg.epsilon.to_f64() * stale).floor() as usize).max(1)
        });
        let fresh = kind == StepKind::Query || last.is_none() || updates_since >= interval;
        let est = if fresh {
            epoch += 1;
            updates_since = 0;
            let e = query(&g, st.matching(), cfg, epoch);
            last = Some(e);
            e
        } else {
            last.expect("carried estimate exists")
        };
        let mu_exact = with_exact.then(|| maximum_matching(&g).size);
        records.push(StepRecord {
            event_index: i,
            kind,
            mu_tilde: est.mu_tilde,
            matched_samples: est.matched_samples,
            r: est.r,
            explored_edges: est.explored_edges,
            budget_exhausted: est.budget_exhausted,
            fresh,
            mu_exact,
        });
    }
    records
}
