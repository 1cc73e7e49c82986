//! Independent brute-force ground truth: exhaustive F-avoiding
//! orientation search, nowhere-zero b-flow search over Z_p, and the
//! subset-sum orientation-existence test of Frank and Gyarfas.

use std::sync::Arc;

use crate::error::{check_guard, Error, Result};
use crate::graph::{ForbiddenSets, Graph, Orientation};

const ORIENTATION_GUARD: u64 = 26;
const SUBSET_GUARD: u64 = 20;
const B_FLOW_GUARD: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Sat(Orientation),
    Unsat,
}

impl SolveOutcome {
    pub fn witness(&self) -> Option<&Orientation> {
        match self {
            SolveOutcome::Sat(d) => Some(d),
            SolveOutcome::Unsat => None,
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }
}

/// Degeneracy order: repeatedly remove a minimum-degree vertex (ties to
/// the lowest index). Every vertex has few neighbors later in the order.
fn degeneracy_positions(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut pos = vec![0usize; n];
    for i in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        removed[v] = true;
        pos[v] = i;
        for &(w, _) in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    pos
}

/// Edge decision order: group edges by their later endpoint under a
/// degeneracy ordering so vertices finalize early and the per-vertex
/// pruning window fires sooner.
fn edge_decision_order(g: &Graph) -> Vec<usize> {
    let pos = degeneracy_positions(g);
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by_key(|&e| {
        let (u, v) = g.endpoints(e);
        let (pu, pv) = (pos[u], pos[v]);
        (pu.max(pv), pu.min(pv), e)
    });
    order
}

/// Exhaustive search for an F-avoiding orientation. Sound (the witness
/// passes the avoidance check) and complete within the edge guard: `Unsat`
/// means the full space was covered. Deterministic: the witness is the
/// first solution in the fixed decision order (stored edge direction
/// before its reverse), so repeated runs agree.
pub fn find_orientation(g: &Arc<Graph>, f: &ForbiddenSets) -> Result<SolveOutcome> {
    check_guard("orientation search edges", g.m() as u64, ORIENTATION_GUARD)?;
    if f.len() != g.n() {
        return Err(Error::Dimension(format!(
            "forbidden sets cover {} vertices, graph has {}",
            f.len(),
            g.n()
        )));
    }
    let n = g.n();
    // Forbidden out-degree masks; imbalance converts exactly.
    let f_out = f.to_out_degree(g)?;
    let mut forbidden = vec![0u64; n];
    for (v, mask) in forbidden.iter_mut().enumerate() {
        for &a in f_out.set(v) {
            *mask |= 1u64 << a;
        }
    }
    for (v, &mask) in forbidden.iter().enumerate() {
        if window_blocked(mask, 0, g.degree(v)) {
            return Ok(SolveOutcome::Unsat);
        }
    }

    let search = OrientationSearch {
        g,
        order: edge_decision_order(g),
        forbidden,
    };
    let mut rem: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut out = vec![0usize; n];
    let mut dir = vec![false; g.m()];
    if search.run(0, &mut rem, &mut out, &mut dir) {
        let d = Orientation::new(Arc::clone(g), dir)?;
        debug_assert!(d.is_f_avoiding(f).unwrap());
        Ok(SolveOutcome::Sat(d))
    } else {
        Ok(SolveOutcome::Unsat)
    }
}

/// A window [out, out+rem] of achievable out-degrees that is fully
/// forbidden can never recover.
fn window_blocked(forb: u64, out: usize, rem: usize) -> bool {
    let mask = if rem >= 63 {
        u64::MAX
    } else {
        (1u64 << (rem + 1)) - 1
    };
    (forb >> out) & mask == mask
}

struct OrientationSearch<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    forbidden: Vec<u64>,
}

impl OrientationSearch<'_> {
    fn run(&self, idx: usize, rem: &mut [usize], out: &mut [usize], dir: &mut [bool]) -> bool {
        if idx == self.order.len() {
            return true;
        }
        let e = self.order[idx];
        let (u, v) = self.g.endpoints(e);
        rem[u] -= 1;
        rem[v] -= 1;
        for along in [true, false] {
            let tail = if along { u } else { v };
            out[tail] += 1;
            dir[e] = along;
            let ok = !window_blocked(self.forbidden[u], out[u], rem[u])
                && !window_blocked(self.forbidden[v], out[v], rem[v]);
            if ok && self.run(idx + 1, rem, out, dir) {
                return true;
            }
            out[tail] -= 1;
        }
        rem[u] += 1;
        rem[v] += 1;
        false
    }
}

/// Exhaustive search for `phi: E -> Z_p \ {0}` with
/// `sum_{e out of v} phi(e) - sum_{e into v} phi(e) = b(v) (mod p)` at
/// every vertex, under the stored edge direction as reference. `b` must
/// sum to zero mod p. Returns the flow values per edge, or `None`.
pub fn find_b_flow(g: &Graph, p: u32, b: &[i64]) -> Result<Option<Vec<u32>>> {
    if !matches!(p, 2 | 3 | 5) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} not a prime at most 5"
        )));
    }
    if b.len() != g.n() {
        return Err(Error::Dimension("boundary length".into()));
    }
    let total: i64 = b.iter().sum();
    if total.rem_euclid(p as i64) != 0 {
        return Err(Error::InvalidParameter(
            "boundary values do not sum to zero mod p".into(),
        ));
    }
    let space = (p as u64 - 1).checked_pow(g.m() as u32).unwrap_or(u64::MAX);
    check_guard("b-flow assignments", space, B_FLOW_GUARD)?;

    let n = g.n();
    let target: Vec<u32> = b.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect();
    // Vertices with no edges must have target zero.
    for (v, &t) in target.iter().enumerate() {
        if g.degree(v) == 0 && t != 0 {
            return Ok(None);
        }
    }
    let search = FlowSearch {
        g,
        order: edge_decision_order(g),
        p,
        target,
    };
    let mut rem: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut acc = vec![0u32; n]; // running boundary mod p
    let mut phi = vec![0u32; g.m()];
    let sat = search.run(0, &mut rem, &mut acc, &mut phi);
    Ok(sat.then_some(phi))
}

struct FlowSearch<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    p: u32,
    target: Vec<u32>,
}

impl FlowSearch<'_> {
    fn run(&self, idx: usize, rem: &mut [usize], acc: &mut [u32], phi: &mut [u32]) -> bool {
        if idx == self.order.len() {
            return true;
        }
        let p = self.p;
        let e = self.order[idx];
        let (u, v) = self.g.endpoints(e);
        rem[u] -= 1;
        rem[v] -= 1;
        for value in 1..p {
            acc[u] = (acc[u] + value) % p;
            acc[v] = (acc[v] + p - value) % p;
            phi[e] = value;
            let ok = (rem[u] > 0 || acc[u] == self.target[u])
                && (rem[v] > 0 || acc[v] == self.target[v]);
            if ok && self.run(idx + 1, rem, acc, phi) {
                return true;
            }
            acc[u] = (acc[u] + p - value) % p;
            acc[v] = (acc[v] + value) % p;
        }
        rem[u] += 1;
        rem[v] += 1;
        false
    }
}

/// The orientation-existence test: `a(v) <= deg+(v) <= b(v)` is realizable
/// iff for every vertex subset `U`,
/// `sum_{v in U} a(v) - e(U, ~U) <= |E(G[U])| <= sum_{v in U} b(v)`.
/// Evaluates all `2^n` subsets.
pub fn frank_gyarfas_check(g: &Graph, a: &[i64], b: &[i64]) -> Result<bool> {
    if a.len() != g.n() || b.len() != g.n() {
        return Err(Error::Dimension("bound vector length".into()));
    }
    if let Some(v) = (0..g.n()).find(|&v| a[v] > b[v]) {
        return Err(Error::InvalidParameter(format!(
            "a({v}) = {} exceeds b({v}) = {}",
            a[v], b[v]
        )));
    }
    check_guard("subset enumeration vertices", g.n() as u64, SUBSET_GUARD)?;
    let n = g.n();
    for mask in 0u64..(1u64 << n) {
        let mut inside = 0i64;
        let mut crossing = 0i64;
        for &(u, v) in g.edges() {
            let iu = mask >> u & 1 == 1;
            let iv = mask >> v & 1 == 1;
            match (iu, iv) {
                (true, true) => inside += 1,
                (true, false) | (false, true) => crossing += 1,
                _ => {}
            }
        }
        let (mut sum_a, mut sum_b) = (0i64, 0i64);
        for v in 0..n {
            if mask >> v & 1 == 1 {
                sum_a += a[v];
                sum_b += b[v];
            }
        }
        if sum_a - crossing > inside || inside > sum_b {
            return Ok(false);
        }
    }
    Ok(true)
}
