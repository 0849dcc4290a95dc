mod common;

use common::{er_graph, shuffled_edges};
use matchkit_core::exact::maximum_matching;
use matchkit_core::numeric::Epsilon;
use matchkit_core::twopass::{run_two_pass, run_two_pass_edges, StreamParams, TwoPassError};
use matchkit_core::{Edge, Graph, UpdateStream};

fn eps(s: &str) -> Epsilon {
    Epsilon::parse(s).unwrap()
}

#[test]
fn four_path_stream_end_to_end() {
    let stream = UpdateStream::parse("n 4\n+ 1 2\n+ 0 1\n+ 2 3\n").unwrap();
    let p = StreamParams::with_k(eps("0.25"), 1);
    let out = run_two_pass(&stream, &p).unwrap();
    assert_eq!(out.pass1.edges(), vec![Edge::new(1, 2)]);
    assert_eq!(
        out.pass2.edges(),
        vec![(Edge::new(0, 1), 1), (Edge::new(2, 3), 1)]
    );
    assert_eq!(out.size, 2);
    assert_eq!(
        out.final_matching.edges(),
        vec![Edge::new(0, 1), Edge::new(2, 3)]
    );
}

#[test]
fn queries_are_ignored_deletions_are_rejected() {
    let with_q = UpdateStream::parse("n 4\n+ 0 1\nq\n+ 2 3\nq\n").unwrap();
    let plain = UpdateStream::parse("n 4\n+ 0 1\n+ 2 3\n").unwrap();
    let p = StreamParams::new(eps("0.25"));
    let a = run_two_pass(&with_q, &p).unwrap();
    let b = run_two_pass(&plain, &p).unwrap();
    assert_eq!(a.size, b.size);
    assert_eq!(a.pass1.edges(), b.pass1.edges());

    let mixed = UpdateStream::parse("n 4\n+ 0 1\n- 0 1\n").unwrap();
    assert_eq!(
        run_two_pass(&mixed, &p).unwrap_err(),
        TwoPassError::MixedStream { index: 1 }
    );
}

#[test]
fn star_center_capacity_binds_storage() {
    // Star on 41 vertices: the first edge is matched, every later edge is
    // cross with the same covered center, so storage stops at k.
    let n = 41;
    let edges: Vec<Edge> = (1..n).map(|v| Edge::new(0, v)).collect();
    let p = StreamParams::new(eps("0.25"));
    assert_eq!(p.k, 27);
    let out = run_two_pass_edges(n, edges, &p);
    assert_eq!(out.pass1.len(), 1);
    assert_eq!(out.pass2.distinct_edge_count(), 27);
    assert_eq!(out.size, 1);
}

#[test]
fn storage_is_linear_in_first_pass_matching() {
    let p = StreamParams::new(eps("0.25"));
    for seed in 0..10u64 {
        let g = er_graph(30, 20, seed);
        let out = run_two_pass_edges(30, shuffled_edges(&g, seed ^ 1), &p);
        // Each covered vertex admits at most k stored edges.
        let bound = 2 * out.pass1.len() as u64 * p.k;
        assert!(out.stored_edges() as u64 <= bound);
        for (e, mult) in out.pass2.edges() {
            assert_eq!(mult, 1);
            let cov = out.pass1.is_covered(e.u()) as u8 + out.pass1.is_covered(e.v()) as u8;
            assert_eq!(cov, 1, "stored edge {e:?} is not a cross edge");
        }
    }
}

#[test]
fn approximation_guarantee_on_random_instances() {
    let e = eps("0.25");
    let p = StreamParams::new(e);
    let factor = (1.0 - e.to_f64()).powi(3) * (2.0 - std::f64::consts::SQRT_2);
    for seed in 0..30u64 {
        let g = er_graph(16, 30, seed.wrapping_mul(7) + 3);
        let mu = maximum_matching(&g).size;
        let out = run_two_pass_edges(16, shuffled_edges(&g, seed), &p);
        assert!(
            out.size as f64 >= factor * mu as f64 - 1e-9,
            "seed {seed}: size {} vs mu {mu}",
            out.size
        );
        assert!(2 * out.pass1.len() >= mu);
        assert!(out.size >= out.pass1.len());
    }
}

#[test]
fn final_matching_uses_only_stored_edges() {
    let p = StreamParams::with_k(eps("0.25"), 2);
    for seed in 40..48u64 {
        let g = er_graph(14, 30, seed);
        let out = run_two_pass_edges(14, shuffled_edges(&g, seed), &p);
        let mut union = Graph::new(14);
        for e in out.pass1.edges() {
            union.insert_edge(e.u(), e.v()).unwrap();
        }
        for (e, _) in out.pass2.edges() {
            let _ = union.insert_edge(e.u(), e.v());
        }
        for e in out.final_matching.edges() {
            assert!(union.has_edge(e.u(), e.v()));
        }
        assert_eq!(out.size, maximum_matching(&union).size);
    }
}
