//! Graph generators shared by the integration tests.

// Each test binary compiles this module separately and uses its own subset.
#![allow(dead_code)]

use matchkit_core::{Edge, Graph};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn er_graph(n: usize, percent: u32, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_range(0..100) < percent {
                g.insert_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn path_graph(n: usize) -> Graph {
    Graph::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).unwrap()
}

/// `t` triangles in a row, consecutive ones joined by a bridge edge.
pub fn triangle_chain(t: usize) -> Graph {
    let mut g = Graph::new(3 * t);
    for i in 0..t {
        let b = 3 * i;
        g.insert_edge(b, b + 1).unwrap();
        g.insert_edge(b + 1, b + 2).unwrap();
        g.insert_edge(b, b + 2).unwrap();
        if i + 1 < t {
            g.insert_edge(b + 2, b + 3).unwrap();
        }
    }
    g
}

pub fn shuffled_edges(g: &Graph, seed: u64) -> Vec<Edge> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges: Vec<Edge> = g.edges().collect();
    for i in (1..edges.len()).rev() {
        let j = rng.random_range(0..=i);
        edges.swap(i, j);
    }
    edges
}
