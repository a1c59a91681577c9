//! The successor graph on (k−1)-tuples of nonnegative integer rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use super::continuation::{continue_row, Constraint, Continuation};
use super::WildError;
use crate::arith::Rational;
use num_traits::ToPrimitive;

/// k−1 consecutive band rows with entries in ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaVertex {
    k: usize,
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl GammaVertex {
    pub fn new(k: usize, n: usize, rows: Vec<Vec<u64>>) -> Result<Self, WildError> {
        if k < 2 || rows.len() + 1 != k {
            return Err(WildError::VertexShape { k, n, rows: rows.len() });
        }
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(WildError::VertexShape { k, n, rows: rows.len() });
        }
        Ok(GammaVertex { k, n, rows })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect()
    }

    /// Whether `(self, w)` overlaps in k−2 rows.
    pub fn overlaps(&self, w: &GammaVertex) -> bool {
        self.k == w.k && self.n == w.n && self.rows[1..] == w.rows[..self.k - 2]
    }

    fn shift(&self, row: Vec<u64>) -> GammaVertex {
        let mut rows = self.rows[1..].to_vec();
        rows.push(row);
        GammaVertex { k: self.k, n: self.n, rows }
    }
}

impl fmt::Display for GammaVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "({})", rows.join(" | "))
    }
}

fn to_u64_row(r: &[Rational], bound: u64) -> Option<Vec<u64>> {
    r.iter().map(|v| v.is_integer().then(|| v.to_integer().to_u64()).flatten().filter(|&x| x <= bound)).collect()
}

/// All `w` such that `(v, w)` is an edge and the new row has entries in `0..=bound`.
pub fn successors(v: &GammaVertex, bound: u64) -> Vec<GammaVertex> {
    let hi = i64::try_from(bound).unwrap_or(i64::MAX);
    let result = continue_row(v.k, v.n, &v.rational_rows(), Constraint::IntegerRange { lo: 0, hi })
        .expect("vertex is well shaped");
    let mut out: Vec<GammaVertex> = match result {
        Continuation::Unique(row) => to_u64_row(&row, bound).map(|r| v.shift(r)).into_iter().collect(),
        Continuation::Free { solutions, .. } => {
            solutions.iter().filter_map(|r| to_u64_row(r, bound)).map(|r| v.shift(r)).collect()
        }
        Continuation::Inconsistent(_) => Vec::new(),
    };
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vertices: 10_000, max_depth: usize::MAX }
    }
}

/// A finite piece of the successor graph. `edges` holds the out-edges of
/// every expanded vertex; `frontier` holds discovered vertices not yet
/// expanded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GammaSubgraph {
    pub vertices: BTreeSet<GammaVertex>,
    pub edges: BTreeMap<GammaVertex, BTreeSet<GammaVertex>>,
    pub frontier: BTreeSet<GammaVertex>,
    pub budget_exhausted: bool,
}

impl GammaSubgraph {
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeSet::len).sum()
    }

    pub fn has_edge(&self, a: &GammaVertex, b: &GammaVertex) -> bool {
        self.edges.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn out_degree(&self, v: &GammaVertex) -> usize {
        self.edges.get(v).map_or(0, BTreeSet::len)
    }

    pub fn edge_list(&self) -> Vec<(&GammaVertex, &GammaVertex)> {
        self.edges.iter().flat_map(|(a, s)| s.iter().map(move |b| (a, b))).collect()
    }

    /// Vertex at position `idx` in canonical order.
    pub fn vertex(&self, idx: usize) -> Option<&GammaVertex> {
        self.vertices.iter().nth(idx)
    }

    pub fn index_of(&self, v: &GammaVertex) -> Option<usize> {
        self.vertices.iter().position(|u| u == v)
    }
}

/// Breadth-first closure of `seeds` under [`successors`], level by level.
/// Expansion of a level runs in parallel; results are merged in canonical
/// vertex order so the output does not depend on scheduling.
pub fn build_subgraph(seeds: &[GammaVertex], bound: u64, limits: Limits) -> GammaSubgraph {
    let mut g = GammaSubgraph::default();
    let mut level: BTreeSet<GammaVertex> = BTreeSet::new();
    for s in seeds {
        if g.vertices.len() >= limits.max_vertices {
            g.budget_exhausted = true;
            g.frontier.insert(s.clone());
            continue;
        }
        g.vertices.insert(s.clone());
        level.insert(s.clone());
    }
    let mut depth = 0;
    while !level.is_empty() {
        if depth >= limits.max_depth {
            g.budget_exhausted = true;
            g.frontier.extend(level);
            break;
        }
        let expanded: Vec<(GammaVertex, Vec<GammaVertex>)> = level
            .into_iter()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|v| {
                let s = successors(&v, bound);
                (v, s)
            })
            .collect();
        let mut next = BTreeSet::new();
        for (v, succ) in expanded {
            let out = g.edges.entry(v).or_default();
            for w in succ {
                if !g.vertices.contains(&w) {
                    if g.vertices.len() >= limits.max_vertices {
                        g.budget_exhausted = true;
                        continue;
                    }
                    g.vertices.insert(w.clone());
                    next.insert(w.clone());
                }
                out.insert(w);
            }
        }
        level = next;
        depth += 1;
    }
    g
}

/// The subgraph induced on `vertices`: edges among them only.
pub fn induced_subgraph(vertices: &[GammaVertex], bound: u64) -> GammaSubgraph {
    let set: BTreeSet<GammaVertex> = vertices.iter().cloned().collect();
    let edges = set
        .iter()
        .cloned()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| {
            let out: BTreeSet<GammaVertex> = successors(&v, bound).into_iter().filter(|w| set.contains(w)).collect();
            (v, out)
        })
        .collect();
    GammaSubgraph { vertices: set, edges, frontier: BTreeSet::new(), budget_exhausted: false }
}

/// Removes vertices of out-degree 0 until none remain.
pub fn prune_dead_ends(g: &GammaSubgraph) -> GammaSubgraph {
    let mut vertices = g.vertices.clone();
    let mut edges = g.edges.clone();
    loop {
        let dead: Vec<GammaVertex> =
            vertices.iter().filter(|v| edges.get(*v).is_none_or(BTreeSet::is_empty)).cloned().collect();
        if dead.is_empty() {
            break;
        }
        for d in &dead {
            vertices.remove(d);
            edges.remove(d);
        }
        for out in edges.values_mut() {
            out.retain(|w| vertices.contains(w));
        }
    }
    GammaSubgraph { vertices, edges, frontier: BTreeSet::new(), budget_exhausted: g.budget_exhausted }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    /// Simple cycles, each starting at its least vertex, in canonical order.
    pub cycles: Vec<Vec<GammaVertex>>,
    /// A longest simple path found.
    pub longest_path: Vec<GammaVertex>,
    /// False when a cap stopped the search early.
    pub complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisCaps {
    pub max_cycle_len: usize,
    pub max_cycles: usize,
    pub max_path_steps: usize,
}

impl Default for AnalysisCaps {
    fn default() -> Self {
        AnalysisCaps { max_cycle_len: 64, max_cycles: 10_000, max_path_steps: 5_000_000 }
    }
}

pub fn analyze(g: &GammaSubgraph, caps: AnalysisCaps) -> Analysis {
    let verts: Vec<&GammaVertex> = g.vertices.iter().collect();
    let index: BTreeMap<&GammaVertex, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let adj: Vec<Vec<usize>> = verts
        .iter()
        .map(|v| g.edges.get(*v).map_or_else(Vec::new, |s| s.iter().filter_map(|w| index.get(w).copied()).collect()))
        .collect();
    let mut complete = true;

    let mut cycles = Vec::new();
    'starts: for s in 0..verts.len() {
        let mut path = vec![s];
        let mut on_path = vec![false; verts.len()];
        on_path[s] = true;
        let mut stack = vec![0usize];
        while let Some(pos) = stack.last_mut() {
            let u = *path.last().expect("nonempty");
            if *pos >= adj[u].len() {
                stack.pop();
                on_path[u] = false;
                path.pop();
                continue;
            }
            let w = adj[u][*pos];
            *pos += 1;
            if w == s {
                if cycles.len() >= caps.max_cycles {
                    complete = false;
                    break 'starts;
                }
                cycles.push(path.iter().map(|&i| verts[i].clone()).collect::<Vec<_>>());
            } else if w > s && !on_path[w] {
                if path.len() >= caps.max_cycle_len {
                    complete = false;
                    continue;
                }
                on_path[w] = true;
                path.push(w);
                stack.push(0);
            }
        }
    }

    let mut best: Vec<usize> = Vec::new();
    let mut steps = 0usize;
    'outer: for s in 0..verts.len() {
        let mut path = vec![s];
        let mut on_path = vec![false; verts.len()];
        on_path[s] = true;
        let mut stack = vec![0usize];
        if best.is_empty() {
            best = path.clone();
        }
        while let Some(pos) = stack.last_mut() {
            steps += 1;
            if steps > caps.max_path_steps {
                complete = false;
                break 'outer;
            }
            let u = *path.last().expect("nonempty");
            if *pos >= adj[u].len() {
                stack.pop();
                on_path[u] = false;
                path.pop();
                continue;
            }
            let w = adj[u][*pos];
            *pos += 1;
            if !on_path[w] {
                on_path[w] = true;
                path.push(w);
                stack.push(0);
                if path.len() > best.len() {
                    best = path.clone();
                    if best.len() == verts.len() {
                        break 'outer;
                    }
                }
            }
        }
    }
    Analysis { cycles, longest_path: best.iter().map(|&i| verts[i].clone()).collect(), complete }
}
