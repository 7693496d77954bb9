//! Seeded random host generation for stress tests: a uniform random
//! spanning tree first, then extra edges up to the requested count, so
//! every sample is connected by construction.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// A random connected graph with `n` vertices and `edges` edges, built from
/// a random tree plus random chords. `edges` is clamped to [n-1, C(n,2)].
pub fn random_connected(seed: u64, n: usize, edges: usize) -> Graph {
    assert!((1..=crate::graph::MAX_VERTICES).contains(&n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_edges = n * (n - 1) / 2;
    let edges = edges.clamp(n.saturating_sub(1), max_edges);

    let mut list: Vec<(usize, usize)> = Vec::with_capacity(edges);
    // random tree: attach each vertex to an earlier one
    for v in 1..n {
        let u = rng.gen_range(0..v);
        list.push((u, v));
    }
    if n >= 2 {
        while list.len() < edges {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b && !list.iter().any(|&(x, y)| (x, y) == order(a, b)) {
                list.push(order(a, b));
            }
        }
    }
    Graph::from_edge_list(n, &list).expect("sampled edges are valid")
}

/// A seeded random connected host within the inductive edge budget
/// n(m+p)-2. Vertex and edge counts are drawn from the same seed, so one
/// u64 reproduces the whole host.
pub fn random_sub_budget_host(seed: u64, n: usize, p: usize, m: usize) -> Graph {
    let budget = n * (m + p) - 2;
    if budget < 2 {
        return Graph::path(budget + 1).expect("tiny path");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_5A5A_0F0F_F0F0);
    let nv = rng.gen_range(3..=(budget + 1).min(24));
    let cap = (nv * (nv - 1) / 2).min(budget);
    let edges = rng.gen_range(nv - 1..=cap);
    random_connected(rng.gen(), nv, edges)
}

fn order(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}
