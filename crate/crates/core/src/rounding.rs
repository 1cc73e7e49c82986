//! Exact fractional rounding over edge-vertex matrices: given `M` whose
//! column for edge `e` is supported on the endpoints of `e`, and a vector
//! `y` in `[0,1]^E`, produce a 0/1 vector `y'` with
//! `(M y')_v >= (M y)_v - b_v` at every vertex, strictly when
//! `b_v = max_e |m_ve| > 0`.
//!
//! The loop follows the existence proof directly: while the fractional
//! support contains a cycle, move along a relief direction `alpha` with
//! `M alpha >= 0` until a coordinate hits the 0/1 box; once the support is
//! a forest, peel leaves, rounding each pendant edge so the inner
//! endpoint's coordinate never decreases. All arithmetic is rational.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexOrdering};
use crate::matrix::{ExactMatrix, Rat};

/// A vertex-by-edge rational matrix whose nonzero pattern is contained in
/// the incidence pattern of a graph. Stored by column: each edge carries
/// its two endpoint coefficients. Row bounds `b_v` are precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeVertexMatrix {
    n: usize,
    edges: Vec<(usize, usize)>,
    coef: Vec<(Rat, Rat)>,
    bound: Vec<Rat>,
}

impl EdgeVertexMatrix {
    /// `coef[e]` holds the coefficients at `edges[e].0` and `edges[e].1`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>, coef: Vec<(Rat, Rat)>) -> Result<Self> {
        if coef.len() != edges.len() {
            return Err(Error::Dimension(format!(
                "{} coefficient pairs for {} edges",
                coef.len(),
                edges.len()
            )));
        }
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidMatrix(format!("bad edge ({u},{v})")));
            }
        }
        let mut bound = vec![Rat::zero(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            let (a, b) = (&coef[e].0, &coef[e].1);
            if a.abs() > bound[u] {
                bound[u] = a.abs();
            }
            if b.abs() > bound[v] {
                bound[v] = b.abs();
            }
        }
        Ok(EdgeVertexMatrix {
            n,
            edges,
            coef,
            bound,
        })
    }

    /// Builds from sparse `(vertex, edge, value)` entries over the edges of
    /// `g`, rejecting entries off the incidence pattern.
    pub fn from_entries(g: &Graph, entries: &[(usize, usize, Rat)]) -> Result<Self> {
        let mut coef = vec![(Rat::zero(), Rat::zero()); g.m()];
        let mut seen = std::collections::BTreeSet::new();
        for (v, e, val) in entries {
            if *e >= g.m() {
                return Err(Error::InvalidMatrix(format!("edge index {e} out of range")));
            }
            let (a, b) = g.endpoints(*e);
            if *v == a {
                coef[*e].0 = val.clone();
            } else if *v == b {
                coef[*e].1 = val.clone();
            } else {
                return Err(Error::InvalidMatrix(format!(
                    "entry at ({v},{e}) violates the incidence pattern: edge {e} = ({a},{b})"
                )));
            }
            if !seen.insert((*v, *e)) {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate entry at ({v},{e})"
                )));
            }
        }
        EdgeVertexMatrix::new(g.n(), g.edges().to_vec(), coef)
    }

    /// The matrix of the deterministic constructions: for each edge, entry
    /// 1 at the endpoint earlier in `ord` and -2 at the later one.
    pub fn one_minus_two(g: &Graph, ord: &VertexOrdering) -> Result<Self> {
        if ord.n() != g.n() {
            return Err(Error::InvalidOrdering(format!(
                "ordering over {} vertices, graph has {}",
                ord.n(),
                g.n()
            )));
        }
        let coef = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                if ord.pos(u) < ord.pos(v) {
                    (Rat::one(), -Rat::from_integer(2.into()))
                } else {
                    (-Rat::from_integer(2.into()), Rat::one())
                }
            })
            .collect();
        EdgeVertexMatrix::new(g.n(), g.edges().to_vec(), coef)
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

    pub fn entry(&self, v: usize, e: usize) -> Rat {
        let (a, b) = self.edges[e];
        if v == a {
            self.coef[e].0.clone()
        } else if v == b {
            self.coef[e].1.clone()
        } else {
            Rat::zero()
        }
    }

    /// `b_v = max_e |m_ve|`.
    pub fn vertex_bound(&self, v: usize) -> &Rat {
        &self.bound[v]
    }

    /// `x = M y`.
    pub fn apply(&self, y: &[Rat]) -> Result<Vec<Rat>> {
        if y.len() != self.edges.len() {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} edges",
                y.len(),
                self.edges.len()
            )));
        }
        let mut x = vec![Rat::zero(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if y[e].is_zero() {
                continue;
            }
            let (a, b) = &self.coef[e];
            if !a.is_zero() {
                x[u] += a * &y[e];
            }
            if !b.is_zero() {
                x[v] += b * &y[e];
            }
        }
        Ok(x)
    }

    /// Dense copy, rows = vertices, columns = edges.
    pub fn to_exact_matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zero(self.n, self.edges.len());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            m.set(u, e, self.coef[e].0.clone());
            m.set(v, e, self.coef[e].1.clone());
        }
        m
    }
}

/// A fractional edge vector, each coordinate in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalEdgeVector {
    values: Vec<Rat>,
}

impl FractionalEdgeVector {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        for (e, y) in values.iter().enumerate() {
            if y < &Rat::zero() || y > &Rat::one() {
                return Err(Error::InvalidParameter(format!(
                    "y[{e}] = {y} outside [0,1]"
                )));
            }
        }
        Ok(FractionalEdgeVector { values })
    }

    pub fn uniform(m: usize, value: Rat) -> Result<Self> {
        FractionalEdgeVector::new(vec![value; m])
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn is_fractional(y: &Rat) -> bool {
    y > &Rat::zero() && y < &Rat::one()
}

/// The lowest-indexed fundamental cycle of the spanning forest built by
/// scanning `support` in increasing edge order. Returns the cycle's edge
/// indices, or `None` when the support is a forest.
fn lowest_fundamental_cycle(
    n: usize,
    edges: &[(usize, usize)],
    support: &[usize],
) -> Option<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in support {
        let (u, v) = edges[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            // Fundamental cycle: tree path u..v plus e.
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut stack = vec![u];
            let mut seen = vec![false; n];
            seen[u] = true;
            while let Some(w) = stack.pop() {
                if w == v {
                    break;
                }
                for &(x, te) in &tree[w] {
                    if !seen[x] {
                        seen[x] = true;
                        prev[x] = Some((w, te));
                        stack.push(x);
                    }
                }
            }
            let mut cycle = vec![e];
            let mut cur = v;
            while cur != u {
                let (w, te) = prev[cur].expect("path exists inside one component");
                cycle.push(te);
                cur = w;
            }
            cycle.sort_unstable();
            return Some(cycle);
        }
        parent[ru] = rv;
        tree[u].push((v, e));
        tree[v].push((u, e));
    }
    None
}

/// Relief direction on a cycle: a nonzero `alpha'` with `M' alpha' >= 0`,
/// where `M'` is the square submatrix on the cycle's vertices and edges.
/// Kernel vector when `M'` is singular; otherwise the solution of
/// `M' alpha' = e_u` for the lowest-indexed cycle vertex `u`.
fn relief_on_cycle(m: &EdgeVertexMatrix, cycle_edges: &[usize]) -> Result<Vec<(usize, Rat)>> {
    let mut vertices: Vec<usize> = cycle_edges
        .iter()
        .flat_map(|&e| {
            let (u, v) = m.edges()[e];
            [u, v]
        })
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.len() != cycle_edges.len() {
        return Err(Error::NotACycle(format!(
            "{} vertices against {} edges",
            vertices.len(),
            cycle_edges.len()
        )));
    }
    let k = vertices.len();
    let mut sub = ExactMatrix::zero(k, k);
    for (j, &e) in cycle_edges.iter().enumerate() {
        for (i, &v) in vertices.iter().enumerate() {
            sub.set(i, j, m.entry(v, e));
        }
    }
    let alpha = match sub.nullspace_vector() {
        Some(kernel) => kernel,
        None => {
            let mut rhs = vec![Rat::zero(); k];
            rhs[0] = Rat::one(); // row 0 is the lowest-indexed cycle vertex
            sub.solve(&rhs)?
                .expect("full column rank square matrix is invertible")
        }
    };
    debug_assert!(alpha.iter().any(|a| !a.is_zero()));
    debug_assert!(sub
        .mul_vec(&alpha)
        .unwrap()
        .iter()
        .all(|x| !x.is_negative()));
    Ok(cycle_edges
        .iter()
        .zip(alpha)
        .map(|(&e, a)| (e, a))
        .collect())
}

/// Public form of the relief computation: `m` must itself be the submatrix
/// of a single cycle (square, every vertex of degree 2, connected).
/// Returns `alpha'` aligned with `m`'s edge order.
pub fn cycle_relief_vector(m: &EdgeVertexMatrix) -> Result<Vec<Rat>> {
    if m.n() != m.m() {
        return Err(Error::NotACycle(format!(
            "matrix is {}x{}, a cycle submatrix is square",
            m.n(),
            m.m()
        )));
    }
    let mut deg = vec![0usize; m.n()];
    for &(u, v) in m.edges() {
        deg[u] += 1;
        deg[v] += 1;
    }
    if deg.iter().any(|&d| d != 2) {
        return Err(Error::NotACycle("a vertex does not have degree 2".into()));
    }
    let support: Vec<usize> = (0..m.m()).collect();
    if lowest_fundamental_cycle(m.n(), m.edges(), &support).is_none_or(|c| c.len() != m.m()) {
        return Err(Error::NotACycle("edges do not form a single cycle".into()));
    }
    let sparse = relief_on_cycle(m, &support)?;
    let mut alpha = vec![Rat::zero(); m.m()];
    for (e, a) in sparse {
        alpha[e] = a;
    }
    Ok(alpha)
}

/// Rounds `y` to a 0/1 vector `y'` with `(M y')_v >= (M y)_v - b_v` at
/// every vertex (strict when `b_v > 0`), never touching coordinates of `y`
/// that are already integral.
pub fn round(m: &EdgeVertexMatrix, y: &FractionalEdgeVector) -> Result<Vec<bool>> {
    if y.len() != m.m() {
        return Err(Error::Dimension(format!(
            "y has {} coordinates for {} edges",
            y.len(),
            m.m()
        )));
    }
    let mut z: Vec<Rat> = y.values().to_vec();

    // Phase 1: kill cycles in the fractional support.
    loop {
        let support: Vec<usize> = (0..m.m()).filter(|&e| is_fractional(&z[e])).collect();
        let Some(cycle) = lowest_fundamental_cycle(m.n(), m.edges(), &support) else {
            break;
        };
        let alpha = relief_on_cycle(m, &cycle)?;
        // Largest p > 0 with z + p*alpha inside the box.
        let mut step: Option<Rat> = None;
        for (e, a) in &alpha {
            if a.is_zero() {
                continue;
            }
            let cand = if a.is_positive() {
                (Rat::one() - &z[*e]) / a
            } else {
                -(&z[*e] / a)
            };
            step = Some(match step {
                Some(s) if s <= cand => s,
                _ => cand,
            });
        }
        let Some(p) = step else {
            return Err(Error::InvalidMatrix(
                "relief direction admits an unbounded step".into(),
            ));
        };
        assert!(
            p.is_positive(),
            "fractional coordinates admit a positive step"
        );
        for (e, a) in &alpha {
            z[*e] += &p * a;
            debug_assert!(z[*e] >= Rat::zero() && z[*e] <= Rat::one());
        }
        let after = (0..m.m()).filter(|&e| is_fractional(&z[e])).count();
        assert!(
            after < support.len(),
            "cycle elimination must shrink the fractional support"
        );
    }

    // Phase 2: the support is a forest; peel leaves.
    loop {
        let support: Vec<usize> = (0..m.m()).filter(|&e| is_fractional(&z[e])).collect();
        if support.is_empty() {
            break;
        }
        let mut frdeg = vec![0usize; m.n()];
        for &e in &support {
            let (u, v) = m.edges()[e];
            frdeg[u] += 1;
            frdeg[v] += 1;
        }
        let leaf = (0..m.n())
            .find(|&v| frdeg[v] == 1)
            .expect("a nonempty forest has a leaf");
        let e = *support
            .iter()
            .find(|&&e| {
                let (u, v) = m.edges()[e];
                u == leaf || v == leaf
            })
            .expect("leaf has one fractional edge");
        let (u, v) = m.edges()[e];
        let other = if u == leaf { v } else { u };
        // Round so the inner endpoint's coordinate does not decrease;
        // when both values tie (zero coefficient), prefer 0.
        let coef_other = m.entry(other, e);
        z[e] = if coef_other.is_positive() {
            Rat::one()
        } else {
            Rat::zero()
        };
    }

    Ok(z.into_iter().map(|v| v.is_one()).collect())
}
