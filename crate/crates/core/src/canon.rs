//! Exact canonical labelling by individualization and refinement.
//!
//! The canonical form of a graph is the lexicographically smallest relabelled
//! adjacency matrix over all labellings consistent with iterated degree
//! refinement. Equality of canonical forms is exactly isomorphism; the
//! enumeration module depends on that, so nothing here is hash-based or
//! approximate.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::graph::{bit, bits, Graph};
use crate::graph6::to_graph6;

/// Label-invariant graph6 string: two graphs get the same string iff they
/// are isomorphic.
pub fn canonical_form(g: &Graph) -> String {
    to_graph6(&canonical_labeling(g).0)
}

/// Canonically relabelled copy of `g` plus the permutation that produced it
/// (`perm[old] = new`).
pub fn canonical_labeling(g: &Graph) -> (Graph, Vec<usize>) {
    let n = g.vertex_count();
    if n == 1 {
        return (g.clone(), vec![0]);
    }
    let mut cells = vec![g.full_mask()];
    refine(g, &mut cells, vec![g.full_mask()]);
    let mut search = Search {
        g,
        n,
        best_rows: None,
        best_perm: Vec::new(),
        generators: Vec::new(),
        path: Vec::new(),
        tried_before: Vec::new(),
        abort_depth: None,
    };
    search.descend(&cells);
    let perm = search.best_perm;
    (g.relabel(&perm), perm)
}

/// Split `cells` until the partition is equitable: every cell has a uniform
/// neighbour count into every other cell. Fragments replace their parent in
/// ascending order of that count, which keeps the cell order a labelling
/// invariant.
fn refine(g: &Graph, cells: &mut Vec<u64>, mut queue: Vec<u64>) {
    while let Some(splitter) = queue.pop() {
        let mut i = 0;
        while i < cells.len() {
            let cell = cells[i];
            if cell.count_ones() > 1 {
                let mut groups: BTreeMap<u32, u64> = BTreeMap::new();
                for v in bits(cell) {
                    *groups
                        .entry((g.neighbors(v) & splitter).count_ones())
                        .or_default() |= bit(v);
                }
                if groups.len() > 1 {
                    let frags: Vec<u64> = groups.into_values().collect();
                    let added = frags.len();
                    cells.splice(i..=i, frags.iter().copied());
                    queue.extend(frags);
                    i += added;
                    continue;
                }
            }
            i += 1;
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    best_rows: Option<Vec<u64>>,
    best_perm: Vec<usize>,
    /// Known automorphisms, used to skip branch candidates that some
    /// path-fixing automorphism maps to an already-tried candidate.
    generators: Vec<Vec<usize>>,
    /// Vertices individualized along the current branch, with the sibling
    /// candidates tried before each of them.
    path: Vec<usize>,
    tried_before: Vec<u64>,
    /// Depth whose candidate just became orbit-equivalent to an earlier
    /// sibling; every active level below it unwinds immediately.
    abort_depth: Option<usize>,
}

impl Search<'_> {
    fn descend(&mut self, cells: &[u64]) {
        let target = cells.iter().position(|c| c.count_ones() > 1);
        let Some(t) = target else {
            self.leaf(cells);
            return;
        };
        let depth = self.path.len();
        let mut tried: u64 = 0;
        for v in bits(cells[t]) {
            if self.reaches_tried(depth, v, tried) {
                continue;
            }
            let mut child: Vec<u64> = cells.to_vec();
            child[t] &= !bit(v);
            let rest = child[t];
            child.insert(t, bit(v));
            refine(self.g, &mut child, vec![bit(v), rest]);
            self.path.push(v);
            self.tried_before.push(tried);
            tried |= bit(v);
            self.descend(&child);
            self.path.pop();
            self.tried_before.pop();
            if let Some(d) = self.abort_depth {
                if d < depth {
                    return;
                }
                // This level's current candidate was the redundant one;
                // resume with its next sibling.
                self.abort_depth = None;
            }
        }
    }

    /// Is `v` mapped into `tried` by the group generated by the known
    /// automorphisms that fix the first `depth` path vertices pointwise?
    /// Computed as the orbit closure of {v} under those generators.
    fn reaches_tried(&self, depth: usize, v: usize, tried: u64) -> bool {
        if tried == 0 || self.generators.is_empty() {
            return false;
        }
        let fixing: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|p| self.path[..depth].iter().all(|&x| p[x] == x))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut orbit = bit(v);
        loop {
            let mut grew = false;
            for p in &fixing {
                for x in bits(orbit) {
                    if orbit & bit(p[x]) == 0 {
                        orbit |= bit(p[x]);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        orbit & tried != 0
    }

    /// After a new generator arrives, find the shallowest level whose current
    /// candidate now lies in the orbit of an earlier sibling. Everything
    /// below that level explores only images of already-visited leaves, so
    /// the search can jump straight back there.
    fn schedule_abort(&mut self) {
        for d in 0..self.path.len() {
            if self.reaches_tried(d, self.path[d], self.tried_before[d]) {
                self.abort_depth = Some(d);
                return;
            }
        }
    }

    fn leaf(&mut self, cells: &[u64]) {
        let mut perm = vec![0usize; self.n];
        for (pos, c) in cells.iter().enumerate() {
            debug_assert_eq!(c.count_ones(), 1);
            perm[c.trailing_zeros() as usize] = pos;
        }
        let rows = relabeled_rows(self.g, &perm);
        match &self.best_rows {
            None => {
                self.best_rows = Some(rows);
                self.best_perm = perm;
            }
            Some(best) => match rows.cmp(best) {
                Ordering::Less => {
                    self.best_rows = Some(rows);
                    self.best_perm = perm;
                }
                Ordering::Equal => {
                    // Two labellings with identical images compose to an
                    // automorphism of g.
                    let mut inv_best = vec![0usize; self.n];
                    for x in 0..self.n {
                        inv_best[self.best_perm[x]] = x;
                    }
                    let sigma: Vec<usize> = (0..self.n).map(|x| inv_best[perm[x]]).collect();
                    debug_assert!(is_automorphism(self.g, &sigma));
                    if sigma.iter().enumerate().any(|(x, &y)| x != y) && self.generators.len() < 128
                    {
                        self.generators.push(sigma);
                        self.schedule_abort();
                    }
                }
                Ordering::Greater => {}
            },
        }
    }
}

fn relabeled_rows(g: &Graph, perm: &[usize]) -> Vec<u64> {
    let mut rows = vec![0u64; g.vertex_count()];
    for &(a, b) in g.edges() {
        let (x, y) = (perm[a as usize], perm[b as usize]);
        rows[x] |= bit(y);
        rows[y] |= bit(x);
    }
    rows
}

fn is_automorphism(g: &Graph, sigma: &[usize]) -> bool {
    g.edges()
        .iter()
        .all(|&(a, b)| g.has_edge(sigma[a as usize], sigma[b as usize]))
}
