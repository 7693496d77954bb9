//! The arrowing decision: does every red/blue coloring of a host contain a
//! red n K_{1,p} or a blue K_{1,m}?
//!
//! A coloring refutes arrowing when it is *good*: the red subgraph has no n
//! vertex-disjoint stars K_{1,p} and no vertex has m blue edges. The search
//! here is exact; every pruning rule discards only branches that provably
//! contain no good total coloring, and exhausting the tree is the proof that
//! the host arrows. A slower mask-enumeration oracle with no shared code
//! paths exists alongside it for cross-checking.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::canon::canonical_labeling;
use crate::error::{CertificateError, GraphError, InstanceError, SearchError};
use crate::graph::{bit, bits, matching_at_least, EdgeId, Graph};
use crate::graph6::{parse_graph6, to_graph6};

/// Parameters (n, p, m) of the pair (n K_{1,p}, K_{1,m}); all at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrowingInstance {
    pub n: usize,
    pub p: usize,
    pub m: usize,
}

impl ArrowingInstance {
    pub fn new(n: usize, p: usize, m: usize) -> Result<Self, InstanceError> {
        if n == 0 || p == 0 || m == 0 {
            return Err(InstanceError::NonPositive { n, p, m });
        }
        Ok(ArrowingInstance { n, p, m })
    }
}

impl std::fmt::Display for ArrowingInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}K_{{1,{}}}, K_{{1,{}}})", self.n, self.p, self.m)
    }
}

/// A total red/blue edge coloring of a specific labelled graph. Indexed by
/// `EdgeId`; an edge is blue iff it is not red.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoColoring {
    graph: Graph,
    red: Vec<bool>,
}

impl TwoColoring {
    pub fn new(graph: Graph, red: Vec<bool>) -> Self {
        assert_eq!(red.len(), graph.edge_count());
        TwoColoring { graph, red }
    }

    pub fn all_blue(graph: Graph) -> Self {
        let red = vec![false; graph.edge_count()];
        TwoColoring { graph, red }
    }

    pub fn from_red_edge_ids(graph: Graph, ids: &[usize]) -> Result<Self, GraphError> {
        let mut red = vec![false; graph.edge_count()];
        for &id in ids {
            if id >= red.len() {
                return Err(GraphError::BadEdgeId {
                    id,
                    edge_count: red.len(),
                });
            }
            red[id] = true;
        }
        Ok(TwoColoring { graph, red })
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    #[inline]
    pub fn is_red(&self, e: EdgeId) -> bool {
        self.red[e.0]
    }

    pub fn red_edge_ids(&self) -> Vec<usize> {
        (0..self.red.len()).filter(|&i| self.red[i]).collect()
    }

    pub fn blue_edge_ids(&self) -> Vec<usize> {
        (0..self.red.len()).filter(|&i| !self.red[i]).collect()
    }

    pub fn red_count(&self) -> usize {
        self.red.iter().filter(|&&r| r).count()
    }

    /// Adjacency rows of the red subgraph.
    pub fn red_adjacency(&self) -> Vec<u64> {
        self.sub_adjacency(true)
    }

    /// Adjacency rows of the blue subgraph.
    pub fn blue_adjacency(&self) -> Vec<u64> {
        self.sub_adjacency(false)
    }

    fn sub_adjacency(&self, want_red: bool) -> Vec<u64> {
        let mut adj = vec![0u64; self.graph.vertex_count()];
        for (i, &(a, b)) in self.graph.edges().iter().enumerate() {
            if self.red[i] == want_red {
                adj[a as usize] |= bit(b as usize);
                adj[b as usize] |= bit(a as usize);
            }
        }
        adj
    }

    pub fn swapped(&self) -> TwoColoring {
        TwoColoring {
            graph: self.graph.clone(),
            red: self.red.iter().map(|r| !r).collect(),
        }
    }
}

/// Largest blue degree over all vertices.
pub fn blue_max_degree(c: &TwoColoring) -> usize {
    c.blue_adjacency()
        .iter()
        .map(|row| row.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Exact maximum number of vertex-disjoint K_{1,p} in `g`. For p = 1 this is
/// the maximum matching.
pub fn star_packing_number(g: &Graph, p: usize) -> usize {
    assert!(p >= 1, "star arity must be at least 1");
    if p == 1 {
        return g.max_matching_size();
    }
    let adj: Vec<u64> = (0..g.vertex_count()).map(|v| g.neighbors(v)).collect();
    let mut k = 0;
    while packing_at_least(&adj, g.full_mask(), p, k + 1) {
        k += 1;
    }
    k
}

/// Decision form with early exit.
pub fn star_packing_at_least(g: &Graph, p: usize, need: usize) -> bool {
    assert!(p >= 1, "star arity must be at least 1");
    let adj: Vec<u64> = (0..g.vertex_count()).map(|v| g.neighbors(v)).collect();
    adj_packing_at_least(&adj, g.full_mask(), p, need)
}

/// Packing decision on raw adjacency rows; `avail` masks the live vertices.
pub(crate) fn adj_packing_at_least(adj: &[u64], avail: u64, p: usize, need: usize) -> bool {
    if p == 1 {
        return match need {
            0 => true,
            _ => matching_at_least(adj, avail, need),
        };
    }
    packing_at_least(adj, avail, p, need)
}

/// Branch and bound: pick the available vertex of maximum remaining degree
/// that is still allowed to be a center, then either center a star there
/// (preferring leaves with no other available neighbour, which are
/// interchangeable) or forbid it as a center.
fn packing_at_least(adj: &[u64], avail: u64, p: usize, need: usize) -> bool {
    packing_rec(adj, avail, 0, p, need)
}

fn packing_rec(adj: &[u64], avail: u64, no_center: u64, p: usize, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    if (avail.count_ones() as usize) < need * (p + 1) {
        return false;
    }
    let mut center = None;
    let mut center_deg = 0;
    for v in bits(avail & !no_center) {
        let d = (adj[v] & avail).count_ones() as usize;
        if d > center_deg {
            center_deg = d;
            center = Some(v);
        }
    }
    let Some(v) = center else { return false };
    if center_deg < p {
        return false;
    }
    let nbrs = adj[v] & avail;
    // Leaves seeing only v are equivalent; take as many as possible, lowest
    // indices first, and branch only over the remainder.
    let mut pend = 0u64;
    for w in bits(nbrs) {
        if adj[w] & avail & !bit(v) == 0 {
            pend |= bit(w);
        }
    }
    let take = (pend.count_ones() as usize).min(p);
    let mut chosen = 0u64;
    for w in bits(pend).take(take) {
        chosen |= bit(w);
    }
    let rest: Vec<usize> = bits(nbrs & !pend).collect();
    let found = choose_rest(&rest, p - take, chosen, &mut |leaves| {
        packing_rec(adj, avail & !(bit(v) | leaves), no_center, p, need - 1)
    });
    if found {
        return true;
    }
    packing_rec(adj, avail, no_center | bit(v), p, need)
}

fn choose_rest(items: &[usize], k: usize, chosen: u64, f: &mut impl FnMut(u64) -> bool) -> bool {
    if k == 0 {
        return f(chosen);
    }
    if items.len() < k {
        return false;
    }
    choose_rest(&items[1..], k - 1, chosen | bit(items[0]), f)
        || choose_rest(&items[1..], k, chosen, f)
}

/// Definitional goodness check: no red n K_{1,p} and no blue K_{1,m}.
pub fn coloring_is_good(c: &TwoColoring, inst: ArrowingInstance) -> bool {
    if blue_max_degree(c) >= inst.m {
        return false;
    }
    let red = c.red_adjacency();
    !adj_packing_at_least(&red, c.graph().full_mask(), inst.p, inst.n)
}

/// Ground-truth oracle: enumerate all 2^e colorings with the definitional
/// check and nothing else. Limited to 20 edges.
pub fn naive_arrows(g: &Graph, inst: ArrowingInstance) -> Result<bool, SearchError> {
    let e = g.edge_count();
    if e > 20 {
        return Err(SearchError::TooManyEdgesForNaive { edges: e });
    }
    let full = g.full_mask();
    for mask in 0u32..(1u32 << e) {
        let mut blue_deg = vec![0usize; g.vertex_count()];
        let mut red_adj = vec![0u64; g.vertex_count()];
        let mut blue_star = false;
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            let (a, b) = (a as usize, b as usize);
            if mask & (1 << i) != 0 {
                red_adj[a] |= bit(b);
                red_adj[b] |= bit(a);
            } else {
                blue_deg[a] += 1;
                blue_deg[b] += 1;
                if blue_deg[a] >= inst.m || blue_deg[b] >= inst.m {
                    blue_star = true;
                    break;
                }
            }
        }
        if blue_star {
            continue;
        }
        if !adj_packing_at_least(&red_adj, full, inst.p, inst.n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Node budget for the exact search. Exceeding it is an error, never a
/// verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 1 << 26 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    /// Wall time is reported but excluded from serialized certificates so
    /// that identical runs produce byte-identical files.
    #[serde(skip, default)]
    pub wall: Duration,
}

/// Outcome of [`arrows`]. `witness_red_edge_ids` is present exactly when the
/// host does not arrow and lists the red edges of a good coloring, numbered
/// in the edge order of the canonical graph6 form in `graph6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowingCertificate {
    pub graph6: String,
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub arrows: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_red_edge_ids: Option<Vec<usize>>,
    pub stats: SearchStats,
}

impl ArrowingCertificate {
    pub fn instance(&self) -> ArrowingInstance {
        ArrowingInstance {
            n: self.n,
            p: self.p,
            m: self.m,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CertificateError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Re-validate from scratch: parse the graph, rebuild the witness, run
    /// the definitional check. No search is involved.
    pub fn validate(&self) -> Result<(), CertificateError> {
        let g = parse_graph6(&self.graph6)?;
        match (&self.witness_red_edge_ids, self.arrows) {
            (Some(_), true) => Err(CertificateError::UnexpectedWitness),
            (None, true) => Ok(()),
            (None, false) => Err(CertificateError::MissingWitness),
            (Some(ids), false) => {
                let coloring = TwoColoring::from_red_edge_ids(g, ids)?;
                if coloring_is_good(&coloring, self.instance()) {
                    Ok(())
                } else {
                    Err(CertificateError::WitnessNotGood {
                        reason: format!(
                            "red={ids:?} admits a red {}K_{{1,{}}} or a blue K_{{1,{}}}",
                            self.n, self.p, self.m
                        ),
                    })
                }
            }
        }
    }
}

/// Decide whether `g` arrows `inst`, exactly, with a certificate.
///
/// Depth-first over edges in descending endpoint degree-sum order. A branch
/// is cut when a vertex would reach m blue edges, or when a lower bound on
/// the red packing over all completions of the branch already reaches n. The
/// first good total coloring found is returned immediately as the witness.
///
/// # Errors
/// [`SearchError::BudgetExceeded`] when the node budget runs out.
pub fn arrows(
    g: &Graph,
    inst: ArrowingInstance,
    budget: SearchBudget,
) -> Result<ArrowingCertificate, SearchError> {
    let started = Instant::now();
    let (witness, mut stats) = search_good_coloring(g, inst, budget)?;
    stats.wall = started.elapsed();
    let mut cert = match witness {
        Some(red) => refutation_certificate(g, inst, &TwoColoring::new(g.clone(), red)),
        None => {
            let (canon, _) = canonical_labeling(g);
            ArrowingCertificate {
                graph6: to_graph6(&canon),
                n: inst.n,
                p: inst.p,
                m: inst.m,
                arrows: true,
                witness_red_edge_ids: None,
                stats: SearchStats::default(),
            }
        }
    };
    cert.stats = stats;
    Ok(cert)
}

/// Package a good coloring of `g` as a refuting certificate. The red edge
/// ids are renumbered into the canonical form's edge order so the file is
/// self-contained; callers must pass a coloring that is actually good.
pub fn refutation_certificate(
    g: &Graph,
    inst: ArrowingInstance,
    col: &TwoColoring,
) -> ArrowingCertificate {
    let (canon, perm) = canonical_labeling(g);
    let mut ids: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| col.is_red(EdgeId(i)))
        .map(|(_, &(a, b))| {
            canon
                .edge_id(perm[a as usize], perm[b as usize])
                .expect("canonical copy has the same edges")
                .0
        })
        .collect();
    ids.sort_unstable();
    ArrowingCertificate {
        graph6: to_graph6(&canon),
        n: inst.n,
        p: inst.p,
        m: inst.m,
        arrows: false,
        witness_red_edge_ids: Some(ids),
        stats: SearchStats::default(),
    }
}

/// Search for a good coloring of `g`; `Ok(None)` means none exists, which is
/// a proof that `g` arrows `inst`.
pub fn find_good_coloring(
    g: &Graph,
    inst: ArrowingInstance,
    budget: SearchBudget,
) -> Result<Option<TwoColoring>, SearchError> {
    let (witness, _) = search_good_coloring(g, inst, budget)?;
    Ok(witness.map(|red| TwoColoring::new(g.clone(), red)))
}

fn search_good_coloring(
    g: &Graph,
    inst: ArrowingInstance,
    budget: SearchBudget,
) -> Result<(Option<Vec<bool>>, SearchStats), SearchError> {
    let n = g.vertex_count();
    let deg: Vec<usize> = g.degrees();
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&i| {
        let (a, b) = g.edges()[i];
        std::cmp::Reverse((deg[a as usize] + deg[b as usize], usize::MAX - i))
    });
    let deg1_mask = (0..n)
        .filter(|&v| deg[v] == 1)
        .fold(0u64, |m, v| m | bit(v));
    let pend_nbrs: Vec<u64> = (0..n).map(|v| g.neighbors(v) & deg1_mask).collect();
    let mut s = Searcher {
        g,
        inst,
        order,
        red: vec![false; g.edge_count()],
        blue_deg: vec![0; n],
        red_adj: vec![0u64; n],
        pend_uncolored: pend_nbrs.iter().map(|m| m.count_ones() as usize).collect(),
        pend_red: vec![0; n],
        pend_nbrs,
        deg,
        nodes: 0,
        prunes: 0,
        budget: budget.max_nodes,
    };
    let found = s.dfs(0)?;
    let stats = SearchStats {
        nodes: s.nodes,
        prunes: s.prunes,
        wall: Duration::ZERO,
    };
    Ok((found.then_some(s.red), stats))
}

struct Searcher<'g> {
    g: &'g Graph,
    inst: ArrowingInstance,
    order: Vec<usize>,
    red: Vec<bool>,
    blue_deg: Vec<usize>,
    red_adj: Vec<u64>,
    /// Per vertex: neighbours of graph degree 1, and how many of the edges
    /// to them are still uncolored / already red. Feeds the forced-red
    /// pigeonhole bound.
    pend_nbrs: Vec<u64>,
    pend_uncolored: Vec<usize>,
    pend_red: Vec<usize>,
    deg: Vec<usize>,
    nodes: u64,
    prunes: u64,
    budget: u64,
}

impl Searcher<'_> {
    fn dfs(&mut self, pos: usize) -> Result<bool, SearchError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SearchError::BudgetExceeded {
                budget: self.budget,
            });
        }
        if self.packing_lower_bound() >= self.inst.n {
            self.prunes += 1;
            return Ok(false);
        }
        if pos == self.order.len() {
            // Blue degrees are below m by construction; settle the red side
            // with the exact check.
            let good =
                !adj_packing_at_least(&self.red_adj, self.g.full_mask(), self.inst.p, self.inst.n);
            return Ok(good);
        }
        let id = self.order[pos];
        let (a, b) = self.g.edges()[id];
        let (a, b) = (a as usize, b as usize);

        if self.blue_deg[a] + 1 < self.inst.m && self.blue_deg[b] + 1 < self.inst.m {
            self.blue_deg[a] += 1;
            self.blue_deg[b] += 1;
            self.note_pendant_colored(a, b, false, true);
            if self.dfs(pos + 1)? {
                // Leave the assignment in place: `red` is the witness.
                return Ok(true);
            }
            self.note_pendant_colored(a, b, false, false);
            self.blue_deg[a] -= 1;
            self.blue_deg[b] -= 1;
        } else {
            self.prunes += 1;
        }

        self.red[id] = true;
        self.red_adj[a] |= bit(b);
        self.red_adj[b] |= bit(a);
        self.note_pendant_colored(a, b, true, true);
        if self.dfs(pos + 1)? {
            return Ok(true);
        }
        self.note_pendant_colored(a, b, true, false);
        self.red_adj[a] &= !bit(b);
        self.red_adj[b] &= !bit(a);
        self.red[id] = false;
        Ok(false)
    }

    #[inline]
    fn note_pendant_colored(&mut self, a: usize, b: usize, red: bool, apply: bool) {
        for (x, y) in [(a, b), (b, a)] {
            if self.deg[y] == 1 {
                if apply {
                    self.pend_uncolored[x] -= 1;
                    if red {
                        self.pend_red[x] += 1;
                    }
                } else {
                    self.pend_uncolored[x] += 1;
                    if red {
                        self.pend_red[x] -= 1;
                    }
                }
            }
        }
    }

    /// Lower bound on the red star packing over every completion of the
    /// current branch that avoids a blue K_{1,m}.
    ///
    /// A vertex of degree >= 2 whose uncolored pendant edges outnumber its
    /// remaining blue capacity is forced to end up with red pendant edges;
    /// if at least p are forced, the vertex centers a red K_{1,p} whose
    /// leaves are private pendants, in every such completion. Those stars
    /// are pairwise disjoint, and a greedy packing of the already-red
    /// subgraph away from them adds the rest.
    fn packing_lower_bound(&self) -> usize {
        let n = self.inst.n;
        let mut count = 0;
        let mut blocked = 0u64;
        for v in 0..self.g.vertex_count() {
            if self.deg[v] < 2 {
                continue;
            }
            let cap = self.inst.m - 1 - self.blue_deg[v];
            let forced = self.pend_red[v] + self.pend_uncolored[v].saturating_sub(cap);
            if forced >= self.inst.p {
                count += 1;
                blocked |= bit(v) | self.pend_nbrs[v];
                if count >= n {
                    return count;
                }
            }
        }
        count + self.greedy_red_packing(!blocked, n - count)
    }

    fn greedy_red_packing(&self, avail0: u64, need: usize) -> usize {
        let mut avail = avail0 & self.g.full_mask();
        let mut count = 0;
        while count < need {
            let mut best = None;
            let mut best_d = 0;
            for v in bits(avail) {
                let d = (self.red_adj[v] & avail).count_ones() as usize;
                if d > best_d {
                    best_d = d;
                    best = Some(v);
                }
            }
            let Some(v) = best else { break };
            if best_d < self.inst.p {
                break;
            }
            let mut used = bit(v);
            for w in bits(self.red_adj[v] & avail).take(self.inst.p) {
                used |= bit(w);
            }
            avail &= !used;
            count += 1;
        }
        count
    }
}
