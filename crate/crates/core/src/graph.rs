//! Graphs, vertex orderings, orientations, spanning subgraphs, and
//! per-vertex forbidden sets, with degree bookkeeping relative to an
//! ordering.
//!
//! All types are immutable after construction and cheap to share via
//! [`std::sync::Arc`]; every operation here is a pure function.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A simple undirected graph with stable vertex and edge indexing.
///
/// Vertices are `0..n`. Edges keep their input endpoint order, which also
/// serves as the reference direction for flows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>, // (neighbor, edge index)
    degree: Vec<usize>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has an endpoint >= n = {n}"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut degree = vec![0usize; n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
            degree[u] += 1;
            degree[v] += 1;
        }
        Ok(Graph {
            n,
            edges,
            adj,
            degree,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    /// Pairs `(neighbor, edge index)` incident to `v`, in edge input order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u.min(v)].iter().any(|&(w, _)| w == u.max(v))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// An explicit permutation of the vertices (the spine of every certificate
/// here: left/right degrees only make sense relative to one of these).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrdering {
    seq: Vec<usize>, // position -> vertex
    pos: Vec<usize>, // vertex -> position
}

impl VertexOrdering {
    /// Builds an ordering from the vertex sequence `seq[k] = k`-th vertex.
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in seq.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrdering(format!("vertex {v} out of range")));
            }
            if pos[v] != usize::MAX {
                return Err(Error::InvalidOrdering(format!("vertex {v} repeated")));
            }
            pos[v] = i;
        }
        Ok(VertexOrdering { seq, pos })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering {
            seq: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    /// Position of vertex `v` in the ordering.
    pub fn pos(&self, v: usize) -> usize {
        self.pos[v]
    }

    /// Vertex at position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.seq[i]
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn reversed(&self) -> Self {
        let mut seq = self.seq.clone();
        seq.reverse();
        VertexOrdering::new(seq).expect("reversal preserves bijection")
    }
}

/// A direction bit per edge of a graph. `dir[e] = true` orients edge `e`
/// along its stored endpoint pair `(u, v)` as the arc `u -> v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    graph: Arc<Graph>,
    dir: Vec<bool>,
}

impl Orientation {
    pub fn new(graph: Arc<Graph>, dir: Vec<bool>) -> Result<Self> {
        if dir.len() != graph.m() {
            return Err(Error::Dimension(format!(
                "orientation has {} direction bits for {} edges",
                dir.len(),
                graph.m()
            )));
        }
        Ok(Orientation { graph, dir })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn dir(&self) -> &[bool] {
        &self.dir
    }

    pub fn tail(&self, e: usize) -> usize {
        let (u, v) = self.graph.endpoints(e);
        if self.dir[e] {
            u
        } else {
            v
        }
    }

    pub fn head(&self, e: usize) -> usize {
        let (u, v) = self.graph.endpoints(e);
        if self.dir[e] {
            v
        } else {
            u
        }
    }

    pub fn arc(&self, e: usize) -> (usize, usize) {
        (self.tail(e), self.head(e))
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.graph.m()).map(|e| self.arc(e)).collect()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.graph
            .neighbors(v)
            .iter()
            .filter(|&&(_, e)| self.tail(e) == v)
            .count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.graph.degree(v) - self.out_degree(v)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.graph.n()];
        for e in 0..self.graph.m() {
            out[self.tail(e)] += 1;
        }
        out
    }

    /// `deg+ - deg-`, which equals `2 deg+ - deg`.
    pub fn imbalance(&self, v: usize) -> i64 {
        2 * self.out_degree(v) as i64 - self.graph.degree(v) as i64
    }

    /// True iff the mode-appropriate statistic avoids the forbidden set at
    /// every vertex.
    pub fn is_f_avoiding(&self, f: &ForbiddenSets) -> Result<bool> {
        if f.len() != self.graph.n() {
            return Err(Error::Dimension(format!(
                "forbidden sets cover {} vertices, graph has {}",
                f.len(),
                self.graph.n()
            )));
        }
        let ok = (0..self.graph.n()).all(|v| {
            let stat = match f.mode() {
                ForbiddenMode::OutDegree => self.out_degree(v) as i64,
                ForbiddenMode::Imbalance => self.imbalance(v),
            };
            !f.set(v).contains(&stat)
        });
        Ok(ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForbiddenMode {
    OutDegree,
    Imbalance,
}

/// Per-vertex finite sets of forbidden values, either of out-degrees or of
/// imbalances. Values that no orientation can attain (out of range, or of
/// the wrong parity in imbalance mode) are dropped at construction; the
/// constructor reports how many were dropped so callers can warn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenSets {
    mode: ForbiddenMode,
    sets: Vec<BTreeSet<i64>>,
}

impl ForbiddenSets {
    pub fn new(g: &Graph, mode: ForbiddenMode, sets: Vec<Vec<i64>>) -> Result<(Self, usize)> {
        if sets.len() != g.n() {
            return Err(Error::InvalidForbidden(format!(
                "{} sets for {} vertices",
                sets.len(),
                g.n()
            )));
        }
        let mut dropped = 0usize;
        let mut clean = Vec::with_capacity(sets.len());
        for (v, vals) in sets.into_iter().enumerate() {
            let deg = g.degree(v) as i64;
            let mut keep = BTreeSet::new();
            for a in vals {
                let admissible = match mode {
                    ForbiddenMode::OutDegree => (0..=deg).contains(&a),
                    ForbiddenMode::Imbalance => (-deg..=deg).contains(&a) && (a - deg) % 2 == 0,
                };
                if admissible {
                    keep.insert(a);
                } else {
                    dropped += 1;
                }
            }
            clean.push(keep);
        }
        Ok((ForbiddenSets { mode, sets: clean }, dropped))
    }

    pub fn empty(n: usize, mode: ForbiddenMode) -> Self {
        ForbiddenSets {
            mode,
            sets: vec![BTreeSet::new(); n],
        }
    }

    pub fn mode(&self) -> ForbiddenMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, v: usize) -> &BTreeSet<i64> {
        &self.sets[v]
    }

    /// Effective list size `|F(v)|` after dropping unattainable values.
    pub fn size(&self, v: usize) -> usize {
        self.sets[v].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.len()).collect()
    }

    /// Translates out-degree mode to imbalance mode via `a -> 2a - deg(v)`.
    /// Cardinalities are preserved.
    pub fn to_imbalance(&self, g: &Graph) -> Result<ForbiddenSets> {
        self.check_graph(g)?;
        match self.mode {
            ForbiddenMode::Imbalance => Ok(self.clone()),
            ForbiddenMode::OutDegree => {
                let sets = self
                    .sets
                    .iter()
                    .enumerate()
                    .map(|(v, s)| s.iter().map(|&a| 2 * a - g.degree(v) as i64).collect())
                    .collect();
                Ok(ForbiddenSets {
                    mode: ForbiddenMode::Imbalance,
                    sets,
                })
            }
        }
    }

    /// Inverse translation; imbalances have the degree parity, so
    /// `a -> (a + deg(v)) / 2` is exact.
    pub fn to_out_degree(&self, g: &Graph) -> Result<ForbiddenSets> {
        self.check_graph(g)?;
        match self.mode {
            ForbiddenMode::OutDegree => Ok(self.clone()),
            ForbiddenMode::Imbalance => {
                let sets = self
                    .sets
                    .iter()
                    .enumerate()
                    .map(|(v, s)| s.iter().map(|&a| (a + g.degree(v) as i64) / 2).collect())
                    .collect();
                Ok(ForbiddenSets {
                    mode: ForbiddenMode::OutDegree,
                    sets,
                })
            }
        }
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.sets.len() != g.n() {
            return Err(Error::Dimension(format!(
                "forbidden sets cover {} vertices, graph has {}",
                self.sets.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// Free-function form of the out-degree to imbalance translation.
pub fn convert_to_imbalance(f: &ForbiddenSets, g: &Graph) -> Result<ForbiddenSets> {
    f.to_imbalance(g)
}

/// A spanning subgraph: one inclusion bit per edge, vertex set unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    graph: Arc<Graph>,
    included: Vec<bool>,
}

impl Subgraph {
    pub fn new(graph: Arc<Graph>, included: Vec<bool>) -> Result<Self> {
        if included.len() != graph.m() {
            return Err(Error::Dimension(format!(
                "subgraph has {} inclusion bits for {} edges",
                included.len(),
                graph.m()
            )));
        }
        Ok(Subgraph { graph, included })
    }

    pub fn empty(graph: Arc<Graph>) -> Self {
        let m = graph.m();
        Subgraph {
            graph,
            included: vec![false; m],
        }
    }

    pub fn full(graph: Arc<Graph>) -> Self {
        let m = graph.m();
        Subgraph {
            graph,
            included: vec![true; m],
        }
    }

    pub fn from_edge_indices(graph: Arc<Graph>, edges: &[usize]) -> Result<Self> {
        let mut included = vec![false; graph.m()];
        for &e in edges {
            if e >= graph.m() {
                return Err(Error::Dimension(format!("edge index {e} out of range")));
            }
            included[e] = true;
        }
        Ok(Subgraph { graph, included })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn included(&self) -> &[bool] {
        &self.included
    }

    pub fn contains(&self, e: usize) -> bool {
        self.included[e]
    }

    pub fn edge_indices(&self) -> Vec<usize> {
        (0..self.graph.m()).filter(|&e| self.included[e]).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }
}

fn same_graph(a: &Graph, b: &Graph) -> bool {
    std::ptr::eq(a, b) || a == b
}

/// Per-vertex `(degL, degR)` relative to `ord`: `degL(v)` counts edges to
/// vertices placed before `v`, `degR(v)` the rest. With `sub` given, only
/// edges of the subgraph are counted.
pub fn left_right_degrees(
    g: &Graph,
    ord: &VertexOrdering,
    sub: Option<&Subgraph>,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if ord.n() != g.n() {
        return Err(Error::InvalidOrdering(format!(
            "ordering over {} vertices, graph has {}",
            ord.n(),
            g.n()
        )));
    }
    if let Some(s) = sub {
        if !same_graph(s.graph(), g) {
            return Err(Error::Dimension(
                "subgraph is over a different graph".into(),
            ));
        }
    }
    let mut deg_l = vec![0usize; g.n()];
    let mut deg_r = vec![0usize; g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if let Some(s) = sub {
            if !s.contains(e) {
                continue;
            }
        }
        let (earlier, later) = if ord.pos(u) < ord.pos(v) {
            (u, v)
        } else {
            (v, u)
        };
        deg_r[earlier] += 1;
        deg_l[later] += 1;
    }
    Ok((deg_l, deg_r))
}

/// An orientation with `deg+(v) >= floor(deg(v)/2)` at every vertex, built
/// by orienting Euler circuits of the graph augmented with virtual edges
/// pairing up odd-degree vertices. Deterministic.
pub fn balanced_orientation(graph: &Arc<Graph>) -> Orientation {
    let n = graph.n();
    let m = graph.m();
    // Adjacency with virtual edges appended after the real ones.
    let mut edges: Vec<(usize, usize)> = graph.edges().to_vec();
    let odd: Vec<usize> = (0..n).filter(|&v| graph.degree(v) % 2 == 1).collect();
    for pair in odd.chunks(2) {
        if let [a, b] = *pair {
            edges.push((a, b));
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; n];
    let mut dir = vec![true; m];
    for start in 0..n {
        // Hierholzer from each yet-unfinished vertex; all degrees are even.
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&v) = stack.last() {
            let mut advanced = false;
            while next[v] < adj[v].len() {
                let (w, e) = adj[v][next[v]];
                next[v] += 1;
                if !used[e] {
                    used[e] = true;
                    stack.push(w);
                    if e < m {
                        // Record traversal direction for real edges.
                        circuit.push((v, e));
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
            }
        }
        for (tail, e) in circuit {
            dir[e] = graph.endpoints(e).0 == tail;
        }
    }
    Orientation::new(Arc::clone(graph), dir).expect("direction bits match edge count")
}
