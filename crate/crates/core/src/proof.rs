//! Constructive good colorings for sub-budget hosts.
//!
//! Any connected host with at most n(m+p)-2 edges (for m above the
//! [`m_min`] threshold) admits a good coloring, and the inductive argument
//! behind that bound tells us how to build one. [`proof_color`] runs the
//! induction as a deterministic case machine, records which case fired at
//! every level, and re-verifies each level's coloring definitionally. Any
//! step that does not apply falls back to exhaustive search; the fallback
//! finding *no* coloring would contradict the bound itself and surfaces as
//! [`ProofError::TheoremContradiction`].

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arrowing::{
    coloring_is_good, find_good_coloring, ArrowingInstance, SearchBudget, TwoColoring,
};
use crate::canon::canonical_form;
use crate::construct::{cover_coloring, degree_partition, m_min, DegreePartition};
use crate::error::{GraphError, ProofError};
use crate::graph::{bit, bits, EdgeId, Graph};

/// Which case fired at one step. Vertex labels refer to the working graph at
/// that step's depth, after any pendant moves recorded before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CaseTag {
    /// n = 1: direct degree-constrained red/blue split.
    Base,
    /// t <= n-1: red on every edge touching U, blue elsewhere.
    Case1Cover { t: usize },
    /// Non-bridge edge inside V removed, recursed, and colored blue.
    Case3VEdge { a: usize, b: usize },
    /// Bridge inside V: components recursed with split budgets, bridge blue.
    Case3VBridge {
        a: usize,
        b: usize,
        a1: usize,
        a2: usize,
    },
    /// Non-bridge edge inside U removed, recursed, and colored red.
    Case3UEdge { a: usize, b: usize },
    /// Bridge inside U: components recursed with split budgets, bridge red.
    Case3UBridge {
        a: usize,
        b: usize,
        a1: usize,
        a2: usize,
    },
    /// Cycle edge {u, v} rerouted to a fresh pendant {u, fresh}.
    PendantMove { u: usize, v: usize, fresh: usize },
    /// Leaves pruned from the tree before selecting the deep vertex.
    LeafPrune { pruned: Vec<usize> },
    /// d(u) <= m+p-2: blue up to m-1 edges at u, every other edge red.
    LowDegreeTerminal { u: usize },
    /// d(u1) = d(u2) = m+p-1: blue m-1 leaf edges at each, rest red; the two
    /// would-be red stars share the deep vertex, so they cannot both pack.
    TwinLeafTerminal { u1: usize, u2: usize },
    /// d(u) >= m+p: u and its leaves deleted, recurse with n-1, deleted red.
    HighDegreeRecurse { u: usize },
    /// d(u3) = m+p-1 and v2 has degree 2: remove v2, u3, and u3's leaves
    /// (exactly m+p edges), recurse with n-1.
    V2U3Terminal { v2: usize, u3: usize },
    /// A step did not apply or its coloring failed verification; exhaustive
    /// search took over for this level.
    FallbackSearch,
}

/// One recorded step of the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub depth: usize,
    /// Red-star target at this level.
    pub n: usize,
    /// Edge count of the working graph at this level.
    pub edges: usize,
    pub case: CaseTag,
}

/// Ordered record of every case the construction took, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
}

impl ProofTrace {
    fn push(&mut self, depth: usize, n: usize, edges: usize, case: CaseTag) {
        self.steps.push(ProofStep {
            depth,
            n,
            edges,
            case,
        });
    }

    pub fn used_fallback(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s.case, CaseTag::FallbackSearch))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Base => write!(f, "base"),
            CaseTag::Case1Cover { t } => write!(f, "cover (t={t})"),
            CaseTag::Case3VEdge { a, b } => write!(f, "V-V edge {{{a},{b}}} blue"),
            CaseTag::Case3VBridge { a, b, a1, a2 } => {
                write!(f, "V-V bridge {{{a},{b}}} blue, budgets {a1}+{a2}")
            }
            CaseTag::Case3UEdge { a, b } => write!(f, "U-U edge {{{a},{b}}} red"),
            CaseTag::Case3UBridge { a, b, a1, a2 } => {
                write!(f, "U-U bridge {{{a},{b}}} red, budgets {a1}+{a2}")
            }
            CaseTag::PendantMove { u, v, fresh } => {
                write!(f, "pendant move {{{u},{v}}} -> {{{u},{fresh}}}")
            }
            CaseTag::LeafPrune { pruned } => write!(f, "prune {} leaves", pruned.len()),
            CaseTag::LowDegreeTerminal { u } => write!(f, "low-degree terminal at {u}"),
            CaseTag::TwinLeafTerminal { u1, u2 } => {
                write!(f, "twin-leaf terminal at {u1}, {u2}")
            }
            CaseTag::HighDegreeRecurse { u } => write!(f, "high-degree recurse at {u}"),
            CaseTag::V2U3Terminal { v2, u3 } => {
                write!(f, "deep-vertex terminal v2={v2}, u3={u3}")
            }
            CaseTag::FallbackSearch => write!(f, "fallback search"),
        }
    }
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:indent$}[n={} e={}] {}",
            "",
            self.n,
            self.edges,
            self.case,
            indent = 2 * self.depth
        )
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Records the pendant moves of [`reduce_to_tree`] so that colorings of the
/// reduced tree lift back to the original host edge by edge.
#[derive(Clone, Debug)]
pub struct PendantMap {
    /// Tree vertex -> original vertex; identity on surviving originals.
    origin: Vec<usize>,
    /// (u, v, fresh): original edge {u, v} became tree edge {u, fresh}.
    moves: Vec<(usize, usize, usize)>,
}

impl PendantMap {
    pub fn moves(&self) -> &[(usize, usize, usize)] {
        &self.moves
    }

    pub fn origin(&self, tree_vertex: usize) -> usize {
        self.origin[tree_vertex]
    }

    /// Pull a coloring of the reduced tree back through the edge bijection.
    pub fn lift(&self, tree_coloring: &TwoColoring, g: &Graph) -> TwoColoring {
        let tree = tree_coloring.graph();
        debug_assert_eq!(tree.edge_count(), g.edge_count());
        let mut red = vec![false; g.edge_count()];
        for (id, &(a, b)) in tree.edges().iter().enumerate() {
            let (x, y) = (self.origin[a as usize], self.origin[b as usize]);
            let orig = g.edge_id(x, y).expect("lifted edge exists in the host");
            red[orig.0] = tree_coloring.is_red(EdgeId(id));
        }
        TwoColoring::new(g.clone(), red)
    }
}

/// Per-side recursion budgets for a bridge split: a = floor((e+1)/(m+p)), the
/// unique integer with (m+p)a - 1 <= e <= (m+p)(a+1) - 2. Whenever
/// e1 + e2 <= n(m+p) - 3 this gives a1 + a2 <= n - 1, so coloring side i for
/// a_i + 1 red stars leaves the combined packing below n.
pub fn split_budgets(e1: usize, e2: usize, m: usize, p: usize) -> (usize, usize) {
    ((e1 + 1) / (m + p), (e2 + 1) / (m + p))
}

/// n = 1 base case: split the edges so every vertex has red degree at most
/// p-1 and blue degree at most m-1. Greedy first, then a bounded repair pass,
/// then exhaustive search; with max degree at most m+p-2 a valid split always
/// exists.
pub fn base_color(g: &Graph, p: usize, m: usize) -> Result<TwoColoring, ProofError> {
    let e = g.edge_count();
    if e + 2 > m + p {
        return Err(ProofError::EdgeBudget {
            edges: e,
            max: m + p - 2,
        });
    }
    let inst = ArrowingInstance::new(1, p, m)?;

    let nv = g.vertex_count();
    let mut red = vec![false; e];
    let mut red_deg = vec![0usize; nv];
    let mut blue_deg = vec![0usize; nv];
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        let (a, b) = (a as usize, b as usize);
        if red_deg[a] + 1 < p && red_deg[b] + 1 < p {
            red[id] = true;
            red_deg[a] += 1;
            red_deg[b] += 1;
        } else {
            blue_deg[a] += 1;
            blue_deg[b] += 1;
        }
    }

    // Repair: a blue-overloaded vertex always has red capacity (its degree is
    // at most m+p-2), so swap one of its blue edges to red, displacing a red
    // edge at the far endpoint if that endpoint is already full.
    let mut budget = e * e;
    'repair: while let Some(v) = (0..nv).find(|&v| blue_deg[v] >= m) {
        if budget == 0 {
            break;
        }
        budget -= 1;
        let vb: Vec<usize> = (0..e)
            .filter(|&id| {
                let (a, b) = g.endpoints(EdgeId(id));
                !red[id] && (a == v || b == v)
            })
            .collect();
        // A blue-overloaded vertex always has red capacity: its total degree
        // is at most m+p-2.
        debug_assert!(red_deg[v] + 2 <= p);
        let other = |id: usize| {
            let (a, b) = g.endpoints(EdgeId(id));
            if a == v {
                b
            } else {
                a
            }
        };
        // Prefer a swap that stays feasible outright.
        if let Some(&id) = vb.iter().find(|&&id| red_deg[other(id)] + 1 < p) {
            let w = other(id);
            red[id] = true;
            red_deg[v] += 1;
            red_deg[w] += 1;
            blue_deg[v] -= 1;
            blue_deg[w] -= 1;
            continue 'repair;
        }
        // Otherwise push a chain: take the first blue edge vw, free capacity
        // at w by recoloring one of w's red edges blue.
        let Some(&id) = vb.first() else { break };
        let w = other(id);
        let Some(wid) = (0..e).find(|&i| {
            red[i] && {
                let (a, b) = g.endpoints(EdgeId(i));
                a == w || b == w
            }
        }) else {
            break;
        };
        let (wa, wb) = g.endpoints(EdgeId(wid));
        red[wid] = false;
        red_deg[wa] -= 1;
        red_deg[wb] -= 1;
        blue_deg[wa] += 1;
        blue_deg[wb] += 1;
        red[id] = true;
        red_deg[v] += 1;
        red_deg[w] += 1;
        blue_deg[v] -= 1;
        blue_deg[w] -= 1;
    }

    let candidate = TwoColoring::new(g.clone(), red);
    if coloring_is_good(&candidate, inst) {
        return Ok(candidate);
    }
    match find_good_coloring(g, inst, SearchBudget::default()) {
        Ok(Some(c)) => Ok(c),
        Ok(None) => Err(ProofError::TheoremContradiction {
            graph6: canonical_form(g),
            n: 1,
            p,
            m,
        }),
        Err(err) => Err(ProofError::Search(err)),
    }
}

/// Replace non-bridge U-V edges uv by pendants uv' until the graph is a
/// tree. Pendant edges are bridges, so each move breaks one independent
/// cycle and the loop runs exactly cyclomatic-number times; edge count and
/// every U-degree are preserved.
pub fn reduce_to_tree(
    g: &Graph,
    part: &DegreePartition,
) -> Result<(Graph, PendantMap), ProofError> {
    for &(a, b) in g.edges() {
        let (a, b) = (a as usize, b as usize);
        if part.in_u(a) == part.in_u(b) {
            return Err(ProofError::IntraClassEdge { a, b });
        }
    }
    let mut cur = g.clone();
    let mut map = PendantMap {
        origin: (0..g.vertex_count()).collect(),
        moves: Vec::new(),
    };
    while let Some(id) = (0..cur.edge_count()).find(|&id| !cur.is_bridge(EdgeId(id))) {
        let (x, y) = cur.endpoints(EdgeId(id));
        let (u, v) = if part.in_u(map.origin[x]) {
            (x, y)
        } else {
            (y, x)
        };
        let fresh = cur.vertex_count();
        cur = match cur.delete_edge(EdgeId(id)).add_pendant(u) {
            Ok(next) => next,
            Err(GraphError::BadVertexCount { .. }) => return Err(ProofError::VertexCap),
            Err(err) => unreachable!("pendant endpoint is valid: {err}"),
        };
        map.moves.push((map.origin[u], map.origin[v], fresh));
        map.origin.push(map.origin[v]);
    }
    debug_assert!(cur.is_connected() && cur.edge_count() + 1 == cur.vertex_count());
    Ok((cur, map))
}

/// How the deep vertex v2 meets the pruned tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectCase {
    /// v2 has at least two leaf neighbors; the two lowest are reported.
    TwoLeaves { u1: usize, u2: usize },
    /// v2 has exactly one leaf neighbor and degree 2 in the pruned tree.
    OneLeafDeg2 { u3: usize },
}

/// Prune the leaves of the tree, then pick the V-vertex v2 ending a longest
/// V-V path of what remains. Maximality forces every off-path neighbor of v2
/// to be a leaf of the pruned tree, which is exactly what the terminal cases
/// consume; shapes that break the pattern report a degenerate selection.
pub fn prune_and_select(
    gprime: &Graph,
    part: &DegreePartition,
) -> Result<(usize, SelectCase), ProofError> {
    let nv = gprime.vertex_count();
    let keep = gprime.full_mask()
        & !(0..nv)
            .filter(|&v| gprime.degree(v) == 1)
            .fold(0u64, |m, v| m | bit(v));
    if keep == 0 {
        return Err(ProofError::DegenerateSelection);
    }
    let pruned_deg = |v: usize| (gprime.neighbors(v) & keep).count_ones() as usize;

    let vcands: Vec<usize> = bits(keep).filter(|&v| !part.in_u(v)).collect();
    if vcands.is_empty() {
        return Err(ProofError::DegenerateSelection);
    }
    let mut best: Option<(usize, usize)> = None; // (distance, v2)
    for &v1 in &vcands {
        let dist = bfs_within(gprime, keep, v1);
        for &v2 in &vcands {
            if let Some(d) = dist[v2] {
                if best.map_or(true, |(bd, _)| d > bd) {
                    best = Some((d, v2));
                }
            }
        }
    }
    let (_, v2) = best.expect("at least the zero-length pair exists");

    let leaf_nbrs: Vec<usize> = bits(gprime.neighbors(v2) & keep)
        .filter(|&u| pruned_deg(u) == 1)
        .collect();
    match leaf_nbrs.len() {
        0 => Err(ProofError::DegenerateSelection),
        1 if pruned_deg(v2) == 2 => Ok((v2, SelectCase::OneLeafDeg2 { u3: leaf_nbrs[0] })),
        1 => Err(ProofError::DegenerateSelection),
        _ => Ok((
            v2,
            SelectCase::TwoLeaves {
                u1: leaf_nbrs[0],
                u2: leaf_nbrs[1],
            },
        )),
    }
}

fn bfs_within(g: &Graph, within: u64, start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[start] = Some(0);
    let mut frontier = vec![start];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for w in bits(g.neighbors(v) & within) {
                if dist[w].is_none() {
                    dist[w] = Some(d);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    dist
}

struct Ctx {
    p: usize,
    m: usize,
    budget: SearchBudget,
}

/// Produce a good coloring of `g` for `inst` by running the inductive
/// construction, together with the trace of cases taken. Requires a
/// connected host within the inductive edge budget n(m+p)-2 and
/// m >= m_min(n, p).
pub fn proof_color(
    g: &Graph,
    inst: ArrowingInstance,
) -> Result<(TwoColoring, ProofTrace), ProofError> {
    let ArrowingInstance { n, p, m } = inst;
    if !g.is_connected() {
        return Err(ProofError::Disconnected);
    }
    let max = n * (m + p) - 2;
    if g.edge_count() > max {
        return Err(ProofError::EdgeBudget {
            edges: g.edge_count(),
            max,
        });
    }
    let threshold = m_min(n, p);
    if m < threshold {
        return Err(ProofError::MBelowThreshold { m, threshold, n, p });
    }
    let ctx = Ctx {
        p,
        m,
        budget: SearchBudget::default(),
    };
    let mut trace = ProofTrace::default();
    let coloring = color_rec(&ctx, g, n, 0, &mut trace)?;
    Ok((coloring, trace))
}

/// One induction level: try the applicable case, verify the result
/// definitionally, and fall back to exhaustive search on any miss.
fn color_rec(
    ctx: &Ctx,
    g: &Graph,
    n: usize,
    depth: usize,
    trace: &mut ProofTrace,
) -> Result<TwoColoring, ProofError> {
    let inst = ArrowingInstance::new(n, ctx.p, ctx.m)?;
    debug_assert!(g.edge_count() + 2 <= n * (ctx.m + ctx.p));
    match attempt(ctx, g, n, depth, trace)? {
        Some(c) if coloring_is_good(&c, inst) => Ok(c),
        _ => {
            trace.push(depth, n, g.edge_count(), CaseTag::FallbackSearch);
            match find_good_coloring(g, inst, ctx.budget) {
                Ok(Some(c)) => Ok(c),
                Ok(None) => Err(ProofError::TheoremContradiction {
                    graph6: canonical_form(g),
                    n,
                    p: ctx.p,
                    m: ctx.m,
                }),
                Err(err) => Err(ProofError::Search(err)),
            }
        }
    }
}

/// Run the case analysis; `Ok(None)` means no case applied cleanly and the
/// caller should fall back.
fn attempt(
    ctx: &Ctx,
    g: &Graph,
    n: usize,
    depth: usize,
    trace: &mut ProofTrace,
) -> Result<Option<TwoColoring>, ProofError> {
    let e = g.edge_count();
    if e == 0 {
        trace.push(depth, n, 0, CaseTag::Base);
        return Ok(Some(TwoColoring::all_blue(g.clone())));
    }
    if n == 1 {
        trace.push(depth, n, e, CaseTag::Base);
        return base_color(g, ctx.p, ctx.m).map(Some);
    }

    let part = degree_partition(g, ctx.m);
    let t = part.t();
    if t < n {
        trace.push(depth, n, e, CaseTag::Case1Cover { t });
        return Ok(Some(cover_coloring(g, &part)));
    }
    if t > n {
        // The edge budget forbids n+1 vertices of degree >= m; reaching this
        // point means an invariant broke upstream, so search instead.
        return Ok(None);
    }

    let side_edge = |in_u: bool| {
        g.edges()
            .iter()
            .position(|&(a, b)| part.in_u(a as usize) == in_u && part.in_u(b as usize) == in_u)
    };
    if let Some(id) = side_edge(false) {
        return colored_edge_step(ctx, g, n, depth, trace, EdgeId(id), false).map(Some);
    }
    if let Some(id) = side_edge(true) {
        return colored_edge_step(ctx, g, n, depth, trace, EdgeId(id), true).map(Some);
    }
    tree_phase(ctx, g, n, depth, trace, &part)
}

/// Shared handler for an edge inside one degree class: remove it, recurse
/// (same n for a cycle edge, split budgets for a bridge), then color it red
/// for a U-U edge and blue for a V-V edge.
fn colored_edge_step(
    ctx: &Ctx,
    g: &Graph,
    n: usize,
    depth: usize,
    trace: &mut ProofTrace,
    id: EdgeId,
    red_edge: bool,
) -> Result<TwoColoring, ProofError> {
    let e = g.edge_count();
    let (a, b) = g.endpoints(id);
    let rest = g.delete_edge(id);
    let mut red = vec![false; e];
    red[id.0] = red_edge;

    if !g.is_bridge(id) {
        let tag = if red_edge {
            CaseTag::Case3UEdge { a, b }
        } else {
            CaseTag::Case3VEdge { a, b }
        };
        trace.push(depth, n, e, tag);
        let sub = color_rec(ctx, &rest, n, depth + 1, trace)?;
        copy_colors(&mut red, g, &sub, None);
        return Ok(TwoColoring::new(g.clone(), red));
    }

    let comps = rest.components();
    debug_assert_eq!(comps.len(), 2);
    let count_edges = |mask: u64| {
        rest.edges()
            .iter()
            .filter(|&&(x, y)| mask & bit(x as usize) != 0 && mask & bit(y as usize) != 0)
            .count()
    };
    let (e1, e2) = (count_edges(comps[0]), count_edges(comps[1]));
    let (a1, a2) = split_budgets(e1, e2, ctx.m, ctx.p);
    debug_assert!(a1 + a2 < n);
    let tag = if red_edge {
        CaseTag::Case3UBridge { a, b, a1, a2 }
    } else {
        CaseTag::Case3VBridge { a, b, a1, a2 }
    };
    trace.push(depth, n, e, tag);
    for (&mask, sub_n) in comps.iter().zip([a1 + 1, a2 + 1]) {
        let (side, relabel) = rest
            .delete_vertices(rest.full_mask() & !mask)
            .expect("bridge side is nonempty");
        let sub = color_rec(ctx, &side, sub_n, depth + 1, trace)?;
        copy_colors(&mut red, g, &sub, Some(&relabel));
    }
    Ok(TwoColoring::new(g.clone(), red))
}

/// Copy a subgraph coloring into `red` on the ambient graph. `relabel` is
/// the ambient-to-subgraph vertex map from `delete_vertices`; `None` means
/// labels already agree (edge deletion only).
fn copy_colors(red: &mut [bool], g: &Graph, sub: &TwoColoring, relabel: Option<&[Option<usize>]>) {
    let inv: Vec<usize> = match relabel {
        Some(map) => {
            let mut inv = vec![0; sub.graph().vertex_count()];
            for (old, new) in map.iter().enumerate() {
                if let Some(new) = new {
                    inv[*new] = old;
                }
            }
            inv
        }
        None => (0..g.vertex_count()).collect(),
    };
    for (sid, &(x, y)) in sub.graph().edges().iter().enumerate() {
        let orig = g
            .edge_id(inv[x as usize], inv[y as usize])
            .expect("subgraph edge exists in the ambient graph");
        red[orig.0] = sub.is_red(EdgeId(sid));
    }
}

/// All edges run between U and V: reroute cycles into pendants, prune, pick
/// the deep vertex, and dispatch on the degree of its leaf neighbors.
fn tree_phase(
    ctx: &Ctx,
    g: &Graph,
    n: usize,
    depth: usize,
    trace: &mut ProofTrace,
    part: &DegreePartition,
) -> Result<Option<TwoColoring>, ProofError> {
    let e = g.edge_count();
    let (gp, pmap) = reduce_to_tree(g, part)?;
    for &(u, v, fresh) in pmap.moves() {
        trace.push(depth, n, e, CaseTag::PendantMove { u, v, fresh });
    }
    let gp_part = degree_partition(&gp, ctx.m);
    debug_assert_eq!(gp_part.u_mask, part.u_mask, "moves preserve U-degrees");

    let pruned: Vec<usize> = (0..gp.vertex_count())
        .filter(|&v| gp.degree(v) == 1)
        .collect();
    trace.push(depth, n, e, CaseTag::LeafPrune { pruned });
    let Ok((v2, case)) = prune_and_select(&gp, &gp_part) else {
        return Ok(None);
    };

    let cands: Vec<usize> = match case {
        SelectCase::TwoLeaves { u1, u2 } => vec![u1, u2],
        SelectCase::OneLeafDeg2 { u3 } => vec![u3],
    };
    if let Some(&u) = cands.iter().find(|&&u| gp.degree(u) + 2 <= ctx.m + ctx.p) {
        trace.push(depth, n, e, CaseTag::LowDegreeTerminal { u });
        let col = low_degree_terminal(&gp, u, ctx.m);
        return Ok(Some(pmap.lift(&col, g)));
    }
    if let Some(&u) = cands.iter().find(|&&u| gp.degree(u) >= ctx.m + ctx.p) {
        trace.push(depth, n, e, CaseTag::HighDegreeRecurse { u });
        let col = high_degree_recurse(ctx, &gp, u, n, depth, trace)?;
        return Ok(col.map(|c| pmap.lift(&c, g)));
    }
    // Every candidate has degree exactly m+p-1.
    match case {
        SelectCase::TwoLeaves { u1, u2 } => {
            trace.push(depth, n, e, CaseTag::TwinLeafTerminal { u1, u2 });
            let col = twin_leaf_terminal(&gp, u1, u2, ctx.m);
            Ok(Some(pmap.lift(&col, g)))
        }
        SelectCase::OneLeafDeg2 { u3 } => {
            trace.push(depth, n, e, CaseTag::V2U3Terminal { v2, u3 });
            let col = v2u3_step(ctx, &gp, v2, u3, n, depth, trace)?;
            Ok(col.map(|c| pmap.lift(&c, g)))
        }
    }
}

fn leaf_edges_at(g: &Graph, u: usize) -> Vec<EdgeId> {
    bits(g.neighbors(u))
        .filter(|&w| g.degree(w) == 1)
        .map(|w| g.edge_id(u, w).expect("neighbor"))
        .collect()
}

/// Blue at most m-1 edges at `u` (leaf edges first), everything else red.
/// With at most m-1 blue edges in total there is no blue star, and u keeps
/// red degree at most p-1, so u cannot serve as one of the n red centers
/// that a red packing would need.
fn low_degree_terminal(g: &Graph, u: usize, m: usize) -> TwoColoring {
    let leaf_ids = leaf_edges_at(g, u);
    let blue: Vec<EdgeId> = if leaf_ids.len() >= m - 1 {
        leaf_ids[..m - 1].to_vec()
    } else {
        bits(g.neighbors(u))
            .map(|w| g.edge_id(u, w).expect("neighbor"))
            .collect()
    };
    let mut red = vec![true; g.edge_count()];
    for id in blue {
        red[id.0] = false;
    }
    TwoColoring::new(g.clone(), red)
}

/// Blue m-1 leaf edges at each of u1, u2, everything else red. Both keep
/// exactly p red edges, one of which runs to the shared deep vertex, so
/// their red stars can never be packed disjointly.
fn twin_leaf_terminal(g: &Graph, u1: usize, u2: usize, m: usize) -> TwoColoring {
    let mut red = vec![true; g.edge_count()];
    for u in [u1, u2] {
        let leaf_ids = leaf_edges_at(g, u);
        for &id in leaf_ids.iter().take(m - 1) {
            red[id.0] = false;
        }
    }
    TwoColoring::new(g.clone(), red)
}

/// Delete u and its leaves, color one fewer star recursively, and return
/// with the deleted edges red: every one of them meets u, so they add at
/// most one star to the packing.
fn high_degree_recurse(
    ctx: &Ctx,
    g: &Graph,
    u: usize,
    n: usize,
    depth: usize,
    trace: &mut ProofTrace,
) -> Result<Option<TwoColoring>, ProofError> {
    let zone = bit(u)
        | bits(g.neighbors(u))
            .filter(|&w| g.degree(w) == 1)
            .fold(0u64, |m, w| m | bit(w));
    let Ok((rest, relabel)) = g.delete_vertices(zone) else {
        return Ok(None);
    };
    if !rest.is_connected() {
        return Ok(None);
    }
    let sub = color_rec(ctx, &rest, n - 1, depth + 1, trace)?;
    let mut red = vec![true; g.edge_count()];
    copy_colors(&mut red, g, &sub, Some(&relabel));
    Ok(Some(TwoColoring::new(g.clone(), red)))
}

/// Remove v2, u3, and u3's leaves (exactly m+p edges when the shape is as
/// selected), recurse with one fewer star, then blue m-1 of u3's leaf edges
/// and red the rest. A red star at u3 would have to take the edge to v2,
/// and v2's only other edge is red too, so the removal zone adds at most
/// one packable star.
fn v2u3_step(
    ctx: &Ctx,
    g: &Graph,
    v2: usize,
    u3: usize,
    n: usize,
    depth: usize,
    trace: &mut ProofTrace,
) -> Result<Option<TwoColoring>, ProofError> {
    let leaf_ids = leaf_edges_at(g, u3);
    let zone = bit(v2)
        | bit(u3)
        | bits(g.neighbors(u3))
            .filter(|&w| g.degree(w) == 1)
            .fold(0u64, |m, w| m | bit(w));
    let Ok((rest, relabel)) = g.delete_vertices(zone) else {
        return Ok(None);
    };
    if g.edge_count() - rest.edge_count() != ctx.m + ctx.p || !rest.is_connected() {
        return Ok(None);
    }
    let sub = color_rec(ctx, &rest, n - 1, depth + 1, trace)?;
    let mut red = vec![true; g.edge_count()];
    for &id in leaf_ids.iter().take(ctx.m - 1) {
        red[id.0] = false;
    }
    copy_colors(&mut red, g, &sub, Some(&relabel));
    Ok(Some(TwoColoring::new(g.clone(), red)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowing::blue_max_degree;
    use crate::construct::construct_upper;
    use crate::enumerate::{enumerate_class, GraphClassQuery};
    use crate::graph6::to_graph6;

    fn good(_g: &Graph, col: &TwoColoring, n: usize, p: usize, m: usize) -> bool {
        coloring_is_good(col, ArrowingInstance::new(n, p, m).unwrap())
    }

    #[test]
    fn split_budget_boundaries() {
        // m+p = 5: the three boundary shapes of the defining inequality.
        assert_eq!(split_budgets(4, 3, 4, 1), (1, 0));
        assert_eq!(split_budgets(8, 0, 4, 1), (1, 0));
        assert_eq!(split_budgets(5, 9, 4, 1), (1, 2));
    }

    #[test]
    fn base_color_trivial_shapes() {
        let p4 = Graph::path(4).unwrap();
        let col = base_color(&p4, 1, 4).unwrap();
        assert_eq!(col.red_count(), 0);
        assert!(good(&p4, &col, 1, 1, 4));

        // Star with m+p-2 edges: center splits p-1 red, m-1 blue.
        let star = Graph::star(4).unwrap();
        let col = base_color(&star, 2, 4).unwrap();
        assert!(good(&star, &col, 1, 2, 4));
        assert_eq!(col.red_count(), 1);
        assert_eq!(blue_max_degree(&col), 3);
    }

    #[test]
    fn base_color_exhaustive_small_corpus() {
        // Every connected host within the n=1 budget admits a split; check
        // against the definition across all small classes.
        for (p, m) in [(1, 5), (2, 4), (3, 3)] {
            for e in 0..=(m + p - 2) {
                for g in enumerate_class(&GraphClassQuery::connected(e)).unwrap() {
                    let col = base_color(&g, p, m).unwrap();
                    assert!(good(&g, &col, 1, p, m), "p={p} m={m} {:?}", g.edges());
                }
            }
        }
    }

    #[test]
    fn base_color_rejects_oversized_hosts() {
        let err = base_color(&Graph::path(6).unwrap(), 1, 4).unwrap_err();
        assert_eq!(err, ProofError::EdgeBudget { edges: 5, max: 3 });
    }

    #[test]
    fn reduce_identity_on_trees() {
        let g = Graph::star(5).unwrap();
        let part = degree_partition(&g, 4);
        let (gp, map) = reduce_to_tree(&g, &part).unwrap();
        assert!(map.moves().is_empty());
        assert_eq!(to_graph6(&gp), to_graph6(&g));
    }

    #[test]
    fn reduce_moves_cycle_edges_to_pendants() {
        // C4 with alternating classes, U picked by fiat via threshold m=2.
        let c4 = Graph::cycle(4).unwrap();
        let part = DegreePartition {
            u_mask: 0b0101,
            v_mask: 0b1010,
        };
        let (gp, map) = reduce_to_tree(&c4, &part).unwrap();
        assert_eq!(map.moves().len(), 1);
        assert_eq!(gp.vertex_count(), 5);
        assert_eq!(gp.edge_count(), 4);
        assert!(gp.is_connected());
        // U-degrees preserved.
        for u in [0, 2] {
            assert_eq!(gp.degree(u), c4.degree(u));
        }
    }

    #[test]
    fn reduce_rejects_intra_class_edges() {
        let k3 = Graph::complete(3).unwrap();
        let part = degree_partition(&k3, 2);
        let err = reduce_to_tree(&k3, &part).unwrap_err();
        assert!(matches!(err, ProofError::IntraClassEdge { .. }));
    }

    #[test]
    fn select_degenerate_on_flat_path() {
        // Path U-V-U: pruning leaves only the middle V vertex, which then
        // has no neighbors at all.
        let p3 = Graph::path(3).unwrap();
        let part = DegreePartition {
            u_mask: 0b101,
            v_mask: 0b010,
        };
        assert_eq!(
            prune_and_select(&p3, &part).unwrap_err(),
            ProofError::DegenerateSelection
        );
    }

    #[test]
    fn select_spider_center() {
        // V-center with three legs of length two: pruning removes the outer
        // V leaves, leaving a star whose U-arms are all leaves.
        let g =
            Graph::from_edge_list(7, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)]).unwrap();
        let part = DegreePartition {
            u_mask: 0b0001110,
            v_mask: 0b1110001,
        };
        let (v2, case) = prune_and_select(&g, &part).unwrap();
        assert_eq!(v2, 0);
        assert_eq!(case, SelectCase::TwoLeaves { u1: 1, u2: 2 });
    }

    #[test]
    fn select_two_stars_sharing_a_leaf() {
        // Stars at 0 and 1 joined through the shared vertex 2.
        let g = Graph::from_edge_list(
            9,
            &[
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 6),
                (1, 7),
                (1, 8),
            ],
        )
        .unwrap();
        let part = degree_partition(&g, 4);
        let (v2, case) = prune_and_select(&g, &part).unwrap();
        assert_eq!(v2, 2);
        assert_eq!(case, SelectCase::TwoLeaves { u1: 0, u2: 1 });
    }

    #[test]
    fn proof_base_only_trace() {
        let g = Graph::star(3).unwrap(); // K_{1,m+p-2} for (1,1,4)
        let (col, trace) = proof_color(&g, ArrowingInstance::new(1, 1, 4).unwrap()).unwrap();
        assert!(good(&g, &col, 1, 1, 4));
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].case, CaseTag::Base);
    }

    #[test]
    fn proof_u_bridge_double_star() {
        // K_{1,4} and K_{1,3} with adjacent centers: the U-U bridge splits
        // into budgets 1 + 0.
        let g = Graph::from_edge_list(
            9,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (5, 6),
                (5, 7),
                (5, 8),
            ],
        )
        .unwrap();
        let (col, trace) = proof_color(&g, ArrowingInstance::new(2, 1, 4).unwrap()).unwrap();
        assert!(good(&g, &col, 2, 1, 4));
        let tags: Vec<&CaseTag> = trace.steps.iter().map(|s| &s.case).collect();
        assert!(matches!(
            tags[0],
            CaseTag::Case3UBridge {
                a: 0,
                b: 5,
                a1: 1,
                a2: 0
            }
        ));
        assert!(matches!(tags[1], CaseTag::Case1Cover { t: 1 }));
        assert!(matches!(tags[2], CaseTag::Base));
        // The bridge itself ends up red.
        assert!(col.is_red(g.edge_id(0, 5).unwrap()));
    }

    #[test]
    fn proof_v_edge_then_u_bridge() {
        // Two adjacent degree-4 centers plus one V-V edge between leaves.
        let g = Graph::from_edge_list(
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (4, 5),
                (4, 6),
                (4, 7),
                (1, 2),
            ],
        )
        .unwrap();
        let (col, trace) = proof_color(&g, ArrowingInstance::new(2, 1, 4).unwrap()).unwrap();
        assert!(good(&g, &col, 2, 1, 4));
        assert!(matches!(
            trace.steps[0].case,
            CaseTag::Case3VEdge { a: 1, b: 2 }
        ));
        assert!(matches!(
            trace.steps[1].case,
            CaseTag::Case3UBridge {
                a: 0,
                b: 4,
                a1: 0,
                a2: 0
            }
        ));
        assert!(!col.is_red(g.edge_id(1, 2).unwrap()));
        assert!(col.is_red(g.edge_id(0, 4).unwrap()));
    }

    #[test]
    fn proof_twin_leaf_terminal() {
        // Two degree-4 centers sharing the deep vertex 2; a pure tree, so
        // the trace goes straight through pruning to the twin terminal.
        let g = Graph::from_edge_list(
            9,
            &[
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 6),
                (1, 7),
                (1, 8),
            ],
        )
        .unwrap();
        let (col, trace) = proof_color(&g, ArrowingInstance::new(2, 1, 4).unwrap()).unwrap();
        assert!(good(&g, &col, 2, 1, 4));
        let tags: Vec<&CaseTag> = trace.steps.iter().map(|s| &s.case).collect();
        assert!(matches!(tags[0], CaseTag::LeafPrune { .. }));
        assert!(matches!(
            tags[1],
            CaseTag::TwinLeafTerminal { u1: 0, u2: 1 }
        ));
        // Both center-to-deep-vertex edges are red, everything else blue.
        assert_eq!(
            col.red_edge_ids(),
            vec![g.edge_id(0, 2).unwrap().0, g.edge_id(1, 2).unwrap().0]
        );
    }

    #[test]
    fn proof_pendant_move_lifts_back() {
        // Two degree-4 centers with two shared V vertices: one cycle, so one
        // pendant move precedes the twin terminal and the lift must restore
        // the moved edge's color.
        let g = Graph::from_edge_list(
            8,
            &[
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 3),
                (1, 6),
                (1, 7),
            ],
        )
        .unwrap();
        let (col, trace) = proof_color(&g, ArrowingInstance::new(2, 1, 4).unwrap()).unwrap();
        assert!(good(&g, &col, 2, 1, 4));
        assert!(matches!(
            trace.steps[0].case,
            CaseTag::PendantMove {
                u: 0,
                v: 2,
                fresh: 8
            }
        ));
        assert!(matches!(
            trace.steps[2].case,
            CaseTag::TwinLeafTerminal { u1: 0, u2: 1 }
        ));
        // The twin terminal keeps exactly the edges into the deep vertex 3
        // red; the moved edge {0,2} comes back blue.
        assert_eq!(
            col.red_edge_ids(),
            vec![g.edge_id(0, 3).unwrap().0, g.edge_id(1, 3).unwrap().0]
        );
    }

    #[test]
    fn proof_high_degree_recurse_decreases_n() {
        // (3,1,8) path of stars whose deep end has degree m+p = 9: the sole
        // candidate u3 triggers the deletion-and-recurse branch.
        let mut edges = vec![(0usize, 3usize), (1, 3), (1, 4), (2, 4)];
        edges.extend((5..12).map(|w| (0, w))); // u1: deg 8
        edges.extend((12..18).map(|w| (1, w))); // u2: deg 8
        edges.extend((18..26).map(|w| (2, w))); // u3: deg 9
        let g = Graph::from_edge_list(26, &edges).unwrap();
        assert_eq!(g.edge_count(), 25);
        let (col, trace) = proof_color(&g, ArrowingInstance::new(3, 1, 8).unwrap()).unwrap();
        assert!(good(&g, &col, 3, 1, 8));
        let hi = trace
            .steps
            .iter()
            .find(|s| matches!(s.case, CaseTag::HighDegreeRecurse { u: 2 }))
            .expect("high-degree case fired");
        assert_eq!(hi.n, 3);
        assert!(trace.steps.iter().any(|s| s.depth > hi.depth && s.n == 2));
    }

    #[test]
    fn proof_v2u3_terminal() {
        // Three degree-8 centers in a path of stars (3,1,8); the deep end
        // fires the v2/u3 removal, which strips exactly m+p = 9 edges.
        let mut edges = vec![(0usize, 3usize), (1, 3), (1, 4), (2, 4)];
        edges.extend((5..12).map(|w| (0, w)));
        edges.extend((12..18).map(|w| (1, w)));
        edges.extend((18..25).map(|w| (2, w)));
        let g = Graph::from_edge_list(25, &edges).unwrap();
        assert_eq!(g.edge_count(), 24);
        let (col, trace) = proof_color(&g, ArrowingInstance::new(3, 1, 8).unwrap()).unwrap();
        assert!(good(&g, &col, 3, 1, 8));
        let step = trace
            .steps
            .iter()
            .find(|s| matches!(s.case, CaseTag::V2U3Terminal { .. }))
            .expect("deep-vertex terminal fired");
        assert_eq!(step.n, 3);
        assert!(trace.steps.iter().any(|s| s.depth > step.depth && s.n == 2));
    }

    #[test]
    fn proof_rejects_bad_preconditions() {
        let two = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        let inst = ArrowingInstance::new(2, 1, 4).unwrap();
        assert_eq!(
            proof_color(&two, inst).unwrap_err(),
            ProofError::Disconnected
        );

        let big = Graph::complete(5).unwrap(); // 10 edges > 2*5-2
        assert_eq!(
            proof_color(&big, inst).unwrap_err(),
            ProofError::EdgeBudget { edges: 10, max: 8 }
        );

        let small = Graph::path(3).unwrap();
        assert_eq!(
            proof_color(&small, ArrowingInstance::new(2, 1, 3).unwrap()).unwrap_err(),
            ProofError::MBelowThreshold {
                m: 3,
                threshold: 4,
                n: 2,
                p: 1
            }
        );
    }

    #[test]
    fn proof_construction_minus_star_edge() {
        // The extremal construction less any star edge drops within budget
        // and must admit a coloring.
        let full = construct_upper(2, 1, 4).unwrap();
        let (rest, _) = full.delete_vertices(bit(1)).unwrap();
        assert_eq!(rest.edge_count(), 8);
        let (col, trace) = proof_color(&rest, ArrowingInstance::new(2, 1, 4).unwrap()).unwrap();
        assert!(good(&rest, &col, 2, 1, 4));
        assert!(!trace.steps.is_empty());
    }

    #[test]
    fn proof_small_corpus_never_hard_errors() {
        // All connected hosts up to 6 edges are below the (2,1,4) budget.
        for e in 0..=6 {
            for g in enumerate_class(&GraphClassQuery::connected(e)).unwrap() {
                let (col, _) = proof_color(&g, ArrowingInstance::new(2, 1, 4).unwrap())
                    .unwrap_or_else(|err| panic!("{err} on {}", to_graph6(&g)));
                assert!(good(&g, &col, 2, 1, 4));
            }
        }
    }

    #[test]
    fn proof_random_hosts_sound() {
        use crate::sample::random_connected;
        let mut rng_seed = 0u64;
        for (n, p) in [(2, 1), (2, 2), (3, 1)] {
            let m = m_min(n, p);
            let budget = n * (m + p) - 2;
            for _ in 0..25 {
                rng_seed += 1;
                let nv = 4 + (rng_seed as usize % 5);
                let extra = rng_seed as usize % 4;
                let g = random_connected(rng_seed, nv, (nv - 1 + extra).min(budget));
                let inst = ArrowingInstance::new(n, p, m).unwrap();
                let (col, _) = proof_color(&g, inst)
                    .unwrap_or_else(|err| panic!("{err} on {}", to_graph6(&g)));
                assert!(coloring_is_good(&col, inst), "seed {rng_seed}");
            }
        }
    }

    #[test]
    fn trace_serializes_and_renders() {
        let g = Graph::from_edge_list(
            9,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (5, 6),
                (5, 7),
                (5, 8),
            ],
        )
        .unwrap();
        let (_, trace) = proof_color(&g, ArrowingInstance::new(2, 1, 4).unwrap()).unwrap();
        let json = trace.to_json();
        let back: ProofTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
        let text = trace.to_string();
        assert!(text.contains("U-U bridge"));
        assert!(text.contains("base"));
    }
}
