use matchkit_core::fractional::FractionalMatching;
use matchkit_core::local::bounded_augmentation;
use matchkit_core::twopass::{run_two_pass_edges, StreamParams};
use matchkit_core::{
    BMatching, Edge, Epsilon, Graph, Matching, Q2, UpdateEvent, UpdateStream,
};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

const N: usize = 12;

fn pair() -> impl Strategy<Value = (usize, usize)> {
    (0..N, 0..N).prop_filter("loops are invalid", |(u, v)| u != v)
}

proptest! {
    #[test]
    fn graph_tracks_a_shadow_edge_set(ops in proptest::collection::vec((pair(), any::<bool>()), 0..120)) {
        let mut g = Graph::new(N);
        let mut shadow: BTreeSet<Edge> = BTreeSet::new();
        for ((u, v), insert) in ops {
            let e = Edge::new(u, v);
            if insert {
                let res = g.insert_edge(u, v);
                prop_assert_eq!(res.is_ok(), shadow.insert(e));
            } else {
                let res = g.delete_edge(u, v);
                prop_assert_eq!(res.is_ok(), shadow.remove(&e));
            }
        }
        prop_assert_eq!(g.edge_count(), shadow.len());
        let listed: Vec<Edge> = g.edges().collect();
        let expect: Vec<Edge> = shadow.iter().copied().collect();
        prop_assert_eq!(listed, expect);
        for v in 0..N {
            let nb: Vec<usize> = g.neighbors(v).collect();
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(nb.len(), g.degree(v));
            for w in nb {
                prop_assert!(shadow.contains(&Edge::new(v, w)));
            }
        }
    }

    #[test]
    fn matching_stays_an_involution(adds in proptest::collection::vec(pair(), 0..40)) {
        let mut m = Matching::new(N);
        for (u, v) in adds {
            let _ = m.add(u, v);
        }
        let mut covered = 0;
        for v in 0..N {
            if let Some(p) = m.mate(v) {
                covered += 1;
                prop_assert_eq!(m.mate(p), Some(v));
                prop_assert_ne!(p, v);
            }
        }
        prop_assert_eq!(covered, 2 * m.len());
        let edges = m.edges();
        prop_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        for e in edges {
            prop_assert!(m.contains_edge(e.u(), e.v()));
        }
    }

    #[test]
    fn bmatching_never_exceeds_capacities(
        caps in proptest::collection::vec(0u64..4, N..=N),
        adds in proptest::collection::vec((pair(), 1u64..3), 0..60),
    ) {
        let mut b = BMatching::new(caps.clone());
        for ((u, v), c) in adds {
            let before_u = b.deg(u);
            let before_v = b.deg(v);
            let admitted = b.try_add(u, v, c).is_ok();
            if admitted {
                prop_assert_eq!(b.deg(u), before_u + c);
                prop_assert_eq!(b.deg(v), before_v + c);
            } else {
                prop_assert!(before_u + c > caps[u] || before_v + c > caps[v]);
                prop_assert_eq!(b.deg(u), before_u);
            }
        }
        let mut per_vertex = vec![0u64; N];
        let mut total = 0u64;
        for (e, c) in b.edges() {
            per_vertex[e.u()] += c;
            per_vertex[e.v()] += c;
            total += c;
        }
        for v in 0..N {
            prop_assert!(per_vertex[v] <= caps[v]);
            prop_assert_eq!(per_vertex[v], b.deg(v));
            prop_assert_eq!(b.residual(v), caps[v] - per_vertex[v]);
        }
        prop_assert_eq!(total, b.total_multiplicity());
    }

    #[test]
    fn fractional_vertex_sums_match_support(
        weights in proptest::collection::vec((pair(), 1i128..4), 0..20),
    ) {
        // Weights w/24 with at most 11 incident edges per vertex of weight
        // at most 3/24 each keep every vertex sum at most 33/24; validity
        // is then exactly "every vertex sum <= 1".
        let mut x = FractionalMatching::new(N);
        for ((u, v), w) in weights {
            x.set(Edge::new(u, v), Q2::from_ratio(w, 24)).unwrap();
        }
        let mut sums: BTreeMap<usize, Q2> = BTreeMap::new();
        let mut total = Q2::zero();
        for (e, w) in x.support() {
            *sums.entry(e.u()).or_insert(Q2::zero()) += w;
            *sums.entry(e.v()).or_insert(Q2::zero()) += w;
            total += w;
        }
        prop_assert_eq!(x.total(), total);
        let mut feasible = true;
        for v in 0..N {
            let s = sums.get(&v).copied().unwrap_or(Q2::zero());
            prop_assert_eq!(x.vertex_sum(v), s);
            if s > Q2::one() {
                feasible = false;
            }
        }
        prop_assert_eq!(x.validate().is_ok(), feasible);
    }

    #[test]
    fn stream_text_roundtrips(ops in proptest::collection::vec((pair(), 0u8..3), 0..80)) {
        let mut present: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut events = Vec::new();
        for ((u, v), kind) in ops {
            let key = (u.min(v), u.max(v));
            match kind {
                0 => {
                    if present.insert(key) {
                        events.push(UpdateEvent::Insert(key.0, key.1));
                    }
                }
                1 => {
                    if present.remove(&key) {
                        events.push(UpdateEvent::Delete(key.0, key.1));
                    }
                }
                _ => events.push(UpdateEvent::Query),
            }
        }
        let stream = UpdateStream { n: N, events };
        let text = stream.render();
        let parsed = UpdateStream::parse(&text).unwrap();
        prop_assert_eq!(parsed.n, stream.n);
        prop_assert_eq!(parsed.events, stream.events);
    }

    #[test]
    fn twopass_invariants_on_arbitrary_insert_streams(
        seq in proptest::collection::vec(pair(), 1..40),
    ) {
        let p = StreamParams::with_k(Epsilon::parse("0.25").unwrap(), 3);
        let mut seen = BTreeSet::new();
        let edges: Vec<Edge> = seq
            .into_iter()
            .map(|(u, v)| Edge::new(u, v))
            .filter(|e| seen.insert(*e))
            .collect();
        let g = Graph::from_edges(N, edges.iter().map(|e| (e.u(), e.v()))).unwrap();
        let out = run_two_pass_edges(N, edges, &p);
        // First pass is maximal on the final graph.
        for e in g.edges() {
            prop_assert!(out.pass1.is_covered(e.u()) || out.pass1.is_covered(e.v()));
        }
        for (e, mult) in out.pass2.edges() {
            prop_assert_eq!(mult, 1);
            prop_assert!(out.pass1.is_covered(e.u()) != out.pass1.is_covered(e.v()));
        }
        prop_assert!(out.size >= out.pass1.len());
        prop_assert_eq!(out.size, out.final_matching.len());
    }

    #[test]
    fn phase_three_leaves_no_short_augmenting_path(
        seq in proptest::collection::vec(pair(), 0..30),
    ) {
        let edges: BTreeSet<Edge> = seq.into_iter().map(|(u, v)| Edge::new(u, v)).collect();
        let mate = bounded_augmentation(&edges, 3);
        let free = |v: usize| !mate.contains_key(&v);
        for e in &edges {
            prop_assert!(!(free(e.u()) && free(e.v())), "not maximal at {e:?}");
        }
        // No augmenting path of length three: a matched edge with distinct
        // free neighbors on both sides.
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in &edges {
            adj.entry(e.u()).or_default().push(e.v());
            adj.entry(e.v()).or_default().push(e.u());
        }
        let empty = Vec::new();
        for (&a, &b) in mate.iter().filter(|(a, b)| a < b) {
            let free_a: Vec<usize> = adj.get(&a).unwrap_or(&empty)
                .iter().copied().filter(|&w| free(w)).collect();
            let free_b: Vec<usize> = adj.get(&b).unwrap_or(&empty)
                .iter().copied().filter(|&w| free(w)).collect();
            let augmentable = free_a.iter().any(|&u| free_b.iter().any(|&v| v != u));
            prop_assert!(!augmentable, "length-3 path through ({a}, {b})");
        }
    }
}
