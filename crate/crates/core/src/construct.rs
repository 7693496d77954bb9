//! Closed-form ingredients: the m threshold, the extremal host, the
//! high/low degree partition and its cover coloring, and the edge-count
//! bound used to cap how many high-degree vertices a small host can carry.

use crate::arrowing::TwoColoring;
use crate::error::{ConstructError, InstanceError};
use crate::graph::{bit, bits, Graph};

/// Smallest m for which the closed-form value n(m+p)-1 is established:
/// ceil((n^2 + 2pn + n - 3) / 2).
pub fn m_min(n: usize, p: usize) -> usize {
    assert!(n >= 1 && p >= 1);
    let x = n * n + 2 * p * n + n - 3;
    x.div_ceil(2)
}

/// Minimum edge count of a graph with t vertices of degree >= m: the t
/// high-degree vertices carry t*m edge endpoints, and at most C(t,2) edges
/// are counted twice. Only meaningful for t <= m.
pub fn min_edges_for_t(t: usize, m: usize) -> Result<usize, ConstructError> {
    if t > m {
        return Err(ConstructError::TExceedsM { t, m });
    }
    Ok(t * m - t * t.saturating_sub(1) / 2)
}

/// The extremal host: n disjoint stars K_{1,m+p-1} whose centers are joined
/// consecutively by a path. It is connected, has n(m+p) vertices and
/// n(m+p)-1 edges, and arrows (n K_{1,p}, K_{1,m}).
pub fn construct_upper(n: usize, p: usize, m: usize) -> Result<Graph, ConstructError> {
    if n == 0 || p == 0 || m == 0 {
        return Err(InstanceError::NonPositive { n, p, m }.into());
    }
    let block = m + p;
    let needed = n * block;
    if needed > crate::graph::MAX_VERTICES {
        return Err(ConstructError::TooLarge { needed });
    }
    let mut edges = Vec::with_capacity(n * block - 1);
    for i in 0..n {
        let center = i * block;
        for leaf in 1..block {
            edges.push((center, center + leaf));
        }
        if i + 1 < n {
            edges.push((center, (i + 1) * block));
        }
    }
    Ok(Graph::from_edge_list(needed, &edges).expect("construction is a valid graph"))
}

/// The split of vertices by degree threshold m: U holds the vertices that
/// could center a blue K_{1,m}, V the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreePartition {
    pub u_mask: u64,
    pub v_mask: u64,
}

impl DegreePartition {
    pub fn t(&self) -> usize {
        self.u_mask.count_ones() as usize
    }

    pub fn in_u(&self, v: usize) -> bool {
        self.u_mask & bit(v) != 0
    }
}

pub fn degree_partition(g: &Graph, m: usize) -> DegreePartition {
    let mut u_mask = 0u64;
    for v in 0..g.vertex_count() {
        if g.degree(v) >= m {
            u_mask |= bit(v);
        }
    }
    DegreePartition {
        u_mask,
        v_mask: g.full_mask() & !u_mask,
    }
}

/// Red on every edge touching U, blue on the rest. With t <= n-1 this is
/// always good: blue vertices have degree < m, and a red n K_{1,p} would
/// contain n disjoint edges, each needing its own vertex of U.
pub fn cover_coloring(g: &Graph, part: &DegreePartition) -> TwoColoring {
    let red: Vec<bool> = g
        .edges()
        .iter()
        .map(|&(a, b)| part.u_mask & (bit(a as usize) | bit(b as usize)) != 0)
        .collect();
    TwoColoring::new(g.clone(), red)
}

/// Convenience for reasoning about U as a list.
pub fn u_vertices(part: &DegreePartition) -> Vec<usize> {
    bits(part.u_mask).collect()
}
