//! Instance generators behind the `gen` subcommand and `gen:` inputs.
//!
//! A spec is `family:arg:arg...`. Insert-only families emit every edge
//! once; `update_mix` emits a churn stream of inserts and deletes over a
//! hidden edge pool. Generation is deterministic in (spec, seed).

use matchkit_core::{UpdateEvent, UpdateStream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec {
    /// `path:n` — path on n vertices.
    Path { n: usize },
    /// `erdos_renyi:n:p` — each pair independently an edge with
    /// probability p, streamed in random order.
    ErdosRenyi { n: usize, p: f64 },
    /// `random_bipartiteish:n:p:imbalance` — vertices split into a left
    /// part of about `imbalance * n` vertices; cross pairs become edges
    /// with probability p.
    RandomBipartiteish { n: usize, p: f64, imbalance: f64 },
    /// `triangle_chain:t` — t triangles joined by bridge edges.
    TriangleChain { t: usize },
    /// `gadget:c` — c disjoint four-vertex gadgets: a matched edge, a
    /// trap vertex forming a triangle over it, and a pendant edge that
    /// arrives last yet is essential to the optimum. A b-matching that
    /// spends capacity on copies of the trap edges misses the pendant
    /// edge; storing distinct edges recovers it.
    Gadget { c: usize },
    /// `update_mix:n:p:steps:delete_ratio` — toggle churn over an
    /// erdos_renyi(n, p) pool: each step deletes a random live edge with
    /// probability `delete_ratio`, otherwise inserts a random absent one.
    UpdateMix {
        n: usize,
        p: f64,
        steps: usize,
        delete_ratio: f64,
    },
}

#[derive(Debug, PartialEq, Eq)]
pub struct SpecError(String);

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad generator spec: {}", self.0)
    }
}

impl std::error::Error for SpecError {}

fn arg<T: FromStr>(parts: &[&str], i: usize, what: &str) -> Result<T, SpecError> {
    parts
        .get(i)
        .ok_or_else(|| SpecError(format!("missing {what}")))?
        .parse()
        .map_err(|_| SpecError(format!("invalid {what}: {}", parts[i])))
}

fn ratio(parts: &[&str], i: usize, what: &str) -> Result<f64, SpecError> {
    let x: f64 = arg(parts, i, what)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(SpecError(format!("{what} must be in [0, 1], got {x}")));
    }
    Ok(x)
}

impl FromStr for GenSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match parts[0] {
            "path" => GenSpec::Path { n: arg(&parts, 1, "vertex count")? },
            "erdos_renyi" => GenSpec::ErdosRenyi {
                n: arg(&parts, 1, "vertex count")?,
                p: ratio(&parts, 2, "edge probability")?,
            },
            "random_bipartiteish" => GenSpec::RandomBipartiteish {
                n: arg(&parts, 1, "vertex count")?,
                p: ratio(&parts, 2, "edge probability")?,
                imbalance: ratio(&parts, 3, "imbalance")?,
            },
            "triangle_chain" => GenSpec::TriangleChain { t: arg(&parts, 1, "triangle count")? },
            "gadget" => GenSpec::Gadget { c: arg(&parts, 1, "copy count")? },
            "update_mix" => GenSpec::UpdateMix {
                n: arg(&parts, 1, "vertex count")?,
                p: ratio(&parts, 2, "edge probability")?,
                steps: arg(&parts, 3, "step count")?,
                delete_ratio: ratio(&parts, 4, "delete ratio")?,
            },
            other => return Err(SpecError(format!("unknown family: {other}"))),
        };
        let expected = match &spec {
            GenSpec::Path { .. } | GenSpec::TriangleChain { .. } | GenSpec::Gadget { .. } => 2,
            GenSpec::ErdosRenyi { .. } => 3,
            GenSpec::RandomBipartiteish { .. } => 4,
            GenSpec::UpdateMix { .. } => 5,
        };
        if parts.len() != expected {
            return Err(SpecError(format!("wrong number of arguments in: {s}")));
        }
        Ok(spec)
    }
}

fn inserts(n: usize, edges: Vec<(usize, usize)>) -> UpdateStream {
    UpdateStream {
        n,
        events: edges
            .into_iter()
            .map(|(u, v)| UpdateEvent::Insert(u, v))
            .collect(),
    }
}

fn bernoulli_pairs(
    pairs: impl Iterator<Item = (usize, usize)>,
    p: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    pairs.filter(|_| rng.random::<f64>() < p).collect()
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

impl GenSpec {
    pub fn generate(&self, seed: u64) -> UpdateStream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match *self {
            GenSpec::Path { n } => {
                inserts(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect())
            }
            GenSpec::ErdosRenyi { n, p } => {
                let mut edges = bernoulli_pairs(all_pairs(n), p, &mut rng);
                shuffle(&mut edges, &mut rng);
                inserts(n, edges)
            }
            GenSpec::RandomBipartiteish { n, p, imbalance } => {
                let left = ((n as f64 * imbalance).round() as usize).clamp(1, n.saturating_sub(1));
                let cross = (0..left).flat_map(|u| (left..n).map(move |v| (u, v)));
                let mut edges = bernoulli_pairs(cross, p, &mut rng);
                shuffle(&mut edges, &mut rng);
                inserts(n, edges)
            }
            GenSpec::TriangleChain { t } => {
                let mut edges = Vec::new();
                for i in 0..t {
                    let b = 3 * i;
                    edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
                    if i + 1 < t {
                        edges.push((b + 2, b + 3));
                    }
                }
                inserts(3 * t, edges)
            }
            GenSpec::Gadget { c } => {
                // Per copy on (a, a+1, a+2, a+3): (a, a+1) arrives matched,
                // a+3 is the trap closing a triangle over it, and the only
                // edge at a+2 arrives last. The optimum (a, a+3), (a+1, a+2)
                // is reachable only if that final edge gets stored.
                let mut edges = Vec::with_capacity(4 * c);
                for i in 0..c {
                    let a = 4 * i;
                    edges.extend([(a, a + 1), (a, a + 3), (a + 1, a + 3), (a + 1, a + 2)]);
                }
                inserts(4 * c, edges)
            }
            GenSpec::UpdateMix { n, p, steps, delete_ratio } => {
                let pool = bernoulli_pairs(all_pairs(n), p, &mut rng);
                let mut absent = pool;
                let mut live: Vec<(usize, usize)> = Vec::new();
                let mut events = Vec::with_capacity(steps);
                for _ in 0..steps {
                    if absent.is_empty() && live.is_empty() {
                        break;
                    }
                    let delete = !live.is_empty()
                        && (absent.is_empty() || rng.random::<f64>() < delete_ratio);
                    if delete {
                        let (u, v) = live.swap_remove(rng.random_range(0..live.len()));
                        events.push(UpdateEvent::Delete(u, v));
                        absent.push((u, v));
                    } else {
                        let (u, v) = absent.swap_remove(rng.random_range(0..absent.len()));
                        events.push(UpdateEvent::Insert(u, v));
                        live.push((u, v));
                    }
                }
                UpdateStream { n, events }
            }
        }
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| ((u + 1)..n).map(move |v| (u, v)))
}
