//! Small simple graphs on at most 64 vertices.
//!
//! Vertices are `0..vertex_count` and adjacency is kept as one `u64` bitmask
//! per vertex, so neighbourhood queries are single mask operations. The edge
//! list is kept sorted lexicographically; the position of an edge in that
//! list is its [`EdgeId`], which stays stable for a given labelled graph and
//! is what colorings and certificates refer to.

use std::fmt;

use crate::error::GraphError;

/// Hard cap on vertices; adjacency rows are single machine words.
pub const MAX_VERTICES: usize = 64;

/// Index of an edge in the lexicographically sorted edge list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Iterate the set bits of a mask as vertex indices.
#[inline]
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

#[inline]
pub fn bit(v: usize) -> u64 {
    1u64 << v
}

/// An immutable labelled simple graph. All mutating operations return a new
/// graph; the type is cheap to clone at the sizes this crate works with.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    edges: Vec<(u8, u8)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Build a graph from an edge list. Duplicate edges collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edge_list(
        vertex_count: usize,
        edge_list: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 || vertex_count > MAX_VERTICES {
            return Err(GraphError::BadVertexCount { got: vertex_count });
        }
        let mut adj = vec![0u64; vertex_count];
        for &(a, b) in edge_list {
            if a >= vertex_count || b >= vertex_count {
                return Err(GraphError::EndpointOutOfRange {
                    endpoint: a.max(b),
                    vertex_count,
                });
            }
            if a == b {
                return Err(GraphError::LoopEdge { vertex: a });
            }
            adj[a] |= bit(b);
            adj[b] |= bit(a);
        }
        Ok(Self::from_adj(vertex_count, adj))
    }

    fn from_adj(n: usize, adj: Vec<u64>) -> Self {
        debug_assert_eq!(adj.len(), n);
        let mut edges = Vec::new();
        for (u, &row) in adj.iter().enumerate() {
            for v in bits(row) {
                if v > u {
                    edges.push((u as u8, v as u8));
                }
            }
        }
        // Row-major over (u, v) with u < v is already lexicographic.
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Graph { n, adj, edges }
    }

    /// Edgeless graph.
    pub fn empty(vertex_count: usize) -> Result<Self, GraphError> {
        Self::from_edge_list(vertex_count, &[])
    }

    /// The star K_{1,leaves} with the center at vertex 0.
    pub fn star(leaves: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Self::from_edge_list(leaves + 1, &edges)
    }

    /// The path on `vertex_count` vertices, 0-1-2-...
    pub fn path(vertex_count: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..vertex_count).map(|v| (v - 1, v)).collect();
        Self::from_edge_list(vertex_count, &edges)
    }

    /// The cycle on `vertex_count >= 3` vertices.
    pub fn cycle(vertex_count: usize) -> Result<Self, GraphError> {
        if vertex_count < 3 {
            return Err(GraphError::BadVertexCount { got: vertex_count });
        }
        let mut edges: Vec<_> = (1..vertex_count).map(|v| (v - 1, v)).collect();
        edges.push((0, vertex_count - 1));
        Self::from_edge_list(vertex_count, &edges)
    }

    /// The complete graph.
    pub fn complete(vertex_count: usize) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for u in 0..vertex_count {
            for v in u + 1..vertex_count {
                edges.push((u, v));
            }
        }
        Self::from_edge_list(vertex_count, &edges)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list; the index of a pair is its `EdgeId`.
    #[inline]
    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        let (a, b) = self.edges[e.0];
        (a as usize, b as usize)
    }

    /// Look up the id of edge {a, b}, if present.
    pub fn edge_id(&self, a: usize, b: usize) -> Option<EdgeId> {
        let key = (a.min(b) as u8, a.max(b) as u8);
        self.edges.binary_search(&key).ok().map(EdgeId)
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] & bit(b) != 0
    }

    /// Neighbourhood of `v` as a bitmask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Degrees sorted in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Mask of all vertices.
    #[inline]
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Vertices reachable from `start` while staying inside `within`.
    pub fn reach(&self, start: usize, within: u64) -> u64 {
        debug_assert!(within & bit(start) != 0);
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for v in bits(frontier) {
                next |= self.adj[v] & within;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.reach(0, self.full_mask()) == self.full_mask()
    }

    /// Connected components as vertex masks, ordered by smallest member.
    pub fn components(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut left = self.full_mask();
        while left != 0 {
            let v = left.trailing_zeros() as usize;
            let comp = self.reach(v, left);
            out.push(comp);
            left &= !comp;
        }
        out
    }

    /// True iff `e` lies on no cycle.
    pub fn is_bridge(&self, e: EdgeId) -> bool {
        let (a, b) = self.endpoints(e);
        let without = self.delete_edge(e);
        without.reach(a, self.full_mask()) & bit(b) == 0
    }

    pub fn delete_edge(&self, e: EdgeId) -> Graph {
        let (a, b) = self.endpoints(e);
        let mut adj = self.adj.clone();
        adj[a] &= !bit(b);
        adj[b] &= !bit(a);
        Self::from_adj(self.n, adj)
    }

    /// Add edge {a, b}; the edge must be absent.
    pub fn add_edge(&self, a: usize, b: usize) -> Result<Graph, GraphError> {
        if a >= self.n || b >= self.n {
            return Err(GraphError::EndpointOutOfRange {
                endpoint: a.max(b),
                vertex_count: self.n,
            });
        }
        if a == b {
            return Err(GraphError::LoopEdge { vertex: a });
        }
        if self.has_edge(a, b) {
            return Err(GraphError::EdgeAlreadyPresent { a, b });
        }
        let mut adj = self.adj.clone();
        adj[a] |= bit(b);
        adj[b] |= bit(a);
        Ok(Self::from_adj(self.n, adj))
    }

    /// Append a fresh vertex adjacent only to `u`; returns the new graph
    /// (the pendant gets index `vertex_count`).
    pub fn add_pendant(&self, u: usize) -> Result<Graph, GraphError> {
        if self.n == MAX_VERTICES {
            return Err(GraphError::BadVertexCount { got: self.n + 1 });
        }
        if u >= self.n {
            return Err(GraphError::EndpointOutOfRange {
                endpoint: u,
                vertex_count: self.n,
            });
        }
        let mut adj = self.adj.clone();
        adj.push(bit(u));
        adj[u] |= bit(self.n);
        Ok(Self::from_adj(self.n + 1, adj))
    }

    /// Delete the vertices in `remove` (and their edges), relabelling the
    /// survivors order-preservingly. Returns the new graph together with the
    /// old-to-new relabelling (`None` for removed vertices).
    pub fn delete_vertices(&self, remove: u64) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        let keep = self.full_mask() & !remove;
        if keep == 0 {
            return Err(GraphError::BadVertexCount { got: 0 });
        }
        let mut relabel = vec![None; self.n];
        let mut next = 0usize;
        for (v, slot) in relabel.iter_mut().enumerate() {
            if keep & bit(v) != 0 {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut adj = vec![0u64; next];
        for v in bits(keep) {
            let nv = relabel[v].unwrap();
            for w in bits(self.adj[v] & keep) {
                adj[nv] |= bit(relabel[w].unwrap());
            }
        }
        Ok((Self::from_adj(next, adj), relabel))
    }

    /// Relabel by `perm` (old index -> new index, a bijection).
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for v in 0..self.n {
            for w in bits(self.adj[v]) {
                adj[perm[v]] |= bit(perm[w]);
            }
        }
        Self::from_adj(self.n, adj)
    }

    /// True iff every edge has an endpoint in `cover`.
    pub fn is_vertex_cover(&self, cover: u64) -> bool {
        self.edges
            .iter()
            .all(|&(a, b)| cover & (bit(a as usize) | bit(b as usize)) != 0)
    }

    /// Max-degree greedy cover; not optimal, but a valid cover.
    pub fn greedy_vertex_cover(&self) -> u64 {
        let mut residual = self.adj.clone();
        let mut cover = 0u64;
        loop {
            let v = (0..self.n).max_by_key(|&v| residual[v].count_ones());
            match v {
                Some(v) if residual[v] != 0 => {
                    cover |= bit(v);
                    for w in bits(residual[v]) {
                        residual[w] &= !bit(v);
                    }
                    residual[v] = 0;
                }
                _ => break,
            }
        }
        cover
    }

    /// Size of a maximum matching, by branch and bound on the first
    /// unsaturated vertex with a free neighbour.
    pub fn max_matching_size(&self) -> usize {
        let mut best = 0;
        matching_rec(&self.adj, self.full_mask(), 0, &mut best);
        best
    }

    /// Decision form: is there a matching with at least `k` edges? Exits as
    /// soon as one is found.
    pub fn matching_at_least(&self, k: usize) -> bool {
        matching_at_least(&self.adj, self.full_mask(), k)
    }
}

fn first_active(adj: &[u64], avail: u64) -> Option<usize> {
    bits(avail).find(|&v| adj[v] & avail != 0)
}

fn matching_rec(adj: &[u64], avail: u64, cur: usize, best: &mut usize) {
    if cur > *best {
        *best = cur;
    }
    // Every edge uses two vertices; crude but effective bound.
    if cur + (avail.count_ones() as usize) / 2 <= *best {
        return;
    }
    let Some(v) = first_active(adj, avail) else {
        return;
    };
    for w in bits(adj[v] & avail) {
        matching_rec(adj, avail & !(bit(v) | bit(w)), cur + 1, best);
    }
    // v stays unmatched.
    matching_rec(adj, avail & !bit(v), cur, best);
}

pub(crate) fn matching_at_least(adj: &[u64], avail: u64, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    if (avail.count_ones() as usize) < 2 * need {
        return false;
    }
    let Some(v) = first_active(adj, avail) else {
        return false;
    };
    for w in bits(adj[v] & avail) {
        if matching_at_least(adj, avail & !(bit(v) | bit(w)), need - 1) {
            return true;
        }
    }
    matching_at_least(adj, avail & !bit(v), need)
}
