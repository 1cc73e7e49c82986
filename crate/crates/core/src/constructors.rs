//! Constructions of (ordering, spanning subgraph) pairs whose per-vertex
//! weight `degL_G(v) - 2 degL_H(v) + degR_H(v)` dominates a target, plus
//! the certificate check itself.
//!
//! Three regimes:
//! - [`build_h_third`]: weight at least `floor(deg(v)/3) - 1` at every
//!   vertex, by rounding the all-1/3 vector against the 1/-2 matrix.
//! - [`build_h_two_thirds`]: given an orientation `D`, weight at least
//!   `floor(2 deg_D+(v) / 3) - 1`, by rounding 2/3 on forward edges after
//!   a move-to-front ordering search.
//! - [`build_h_random`]: randomized construction aiming at
//!   `(sqrt(2) - 1 - 2 gamma) deg(v)`, accepted only when an exact
//!   conservative comparison confirms the bound at every vertex.

use std::sync::{Arc, OnceLock};

use num::bigint::BigInt;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{
    left_right_degrees, ForbiddenSets, Graph, Orientation, Subgraph, VertexOrdering,
};
use crate::matrix::{format_rat, rat, Rat};
use crate::rounding::{round, EdgeVertexMatrix, FractionalEdgeVector};

/// A vertex ordering and spanning subgraph together with the per-vertex
/// slack of the certificate inequality
/// `|F(v)| <= degL_G(v) - 2 degL_H(v) + degR_H(v)`.
/// Nonnegative slack everywhere certifies an F-avoiding orientation.
#[derive(Clone, Debug)]
pub struct HCertificate {
    pub ordering: VertexOrdering,
    pub h: Subgraph,
    pub slack: Vec<i64>,
    pub valid: bool,
}

/// Per-vertex weight `degL_G(v) - 2 degL_H(v) + degR_H(v)`.
pub fn weight(g: &Graph, ord: &VertexOrdering, h: &Subgraph) -> Result<Vec<i64>> {
    let (gl, _) = left_right_degrees(g, ord, None)?;
    let (hl, hr) = left_right_degrees(g, ord, Some(h))?;
    Ok((0..g.n())
        .map(|v| gl[v] as i64 - 2 * hl[v] as i64 + hr[v] as i64)
        .collect())
}

/// Evaluates the certificate inequality for `(ord, h)` against `f`.
pub fn certify_h_condition(
    g: &Graph,
    ord: &VertexOrdering,
    h: &Subgraph,
    f: &ForbiddenSets,
) -> Result<HCertificate> {
    if f.len() != g.n() {
        return Err(Error::Dimension(format!(
            "forbidden sets cover {} vertices, graph has {}",
            f.len(),
            g.n()
        )));
    }
    let w = weight(g, ord, h)?;
    let slack: Vec<i64> = (0..g.n()).map(|v| w[v] - f.size(v) as i64).collect();
    let valid = slack.iter().all(|&s| s >= 0);
    Ok(HCertificate {
        ordering: ord.clone(),
        h: h.clone(),
        slack,
        valid,
    })
}

/// Rounds the all-1/3 vector against the 1/-2 matrix for `ord`. The
/// returned subgraph has weight at least `floor(deg(v)/3) - 1` at every
/// vertex, so the certificate succeeds whenever
/// `|F(v)| <= floor(deg(v)/3) - 1`.
pub fn build_h_third(g: &Arc<Graph>, ord: &VertexOrdering) -> Result<(VertexOrdering, Subgraph)> {
    let m = EdgeVertexMatrix::one_minus_two(g, ord)?;
    let y = FractionalEdgeVector::uniform(g.m(), rat(1, 3))?;
    let bits = round(&m, &y)?;
    let h = Subgraph::new(Arc::clone(g), bits)?;
    let w = weight(g, ord, &h)?;
    for (v, wv) in w.iter().enumerate() {
        assert!(
            *wv >= g.degree(v) as i64 / 3 - 1,
            "rounding guarantee violated at vertex {v}"
        );
    }
    Ok((ord.clone(), h))
}

/// Move-to-front local search for an ordering in which every vertex has at
/// least as many backward out-arcs as forward in-arcs
/// (`degL+(v) >= degL-(v)`). Each move strictly decreases the number of
/// forward arcs, so at most `m` moves happen.
pub fn minimize_forward_edges(g: &Graph, d: &Orientation) -> Result<VertexOrdering> {
    if !std::ptr::eq(d.graph().as_ref(), g) && d.graph().as_ref() != g {
        return Err(Error::Dimension(
            "orientation is over a different graph".into(),
        ));
    }
    let n = g.n();
    let mut seq: Vec<usize> = (0..n).collect();
    let mut moves = 0usize;
    loop {
        let mut pos = vec![0usize; n];
        for (i, &v) in seq.iter().enumerate() {
            pos[v] = i;
        }
        let mut left_out = vec![0i64; n]; // backward arcs leaving v
        let mut left_in = vec![0i64; n]; // forward arcs entering v
        for e in 0..g.m() {
            let (t, h) = d.arc(e);
            if pos[t] < pos[h] {
                left_in[h] += 1;
            } else {
                left_out[t] += 1;
            }
        }
        let Some(v) = (0..n).find(|&v| left_out[v] < left_in[v]) else {
            break;
        };
        let at = pos[v];
        seq.remove(at);
        seq.insert(0, v);
        moves += 1;
        // Each move strictly decreases the forward count, bounded by m.
        assert!(moves <= g.m(), "local search exceeded its move bound");
    }
    VertexOrdering::new(seq)
}

/// Rounds 2/3 on forward edges (and 0 on backward edges) of `d` under a
/// forward-minimizing ordering. The returned subgraph has weight at least
/// `floor(2 deg_D+(v) / 3) - 1` at every vertex.
pub fn build_h_two_thirds(g: &Arc<Graph>, d: &Orientation) -> Result<(VertexOrdering, Subgraph)> {
    let ord = minimize_forward_edges(g, d)?;
    let m = EdgeVertexMatrix::one_minus_two(g, &ord)?;
    let y_vals: Vec<Rat> = (0..g.m())
        .map(|e| {
            let (t, h) = d.arc(e);
            if ord.pos(t) < ord.pos(h) {
                rat(2, 3)
            } else {
                Rat::zero()
            }
        })
        .collect();
    let y = FractionalEdgeVector::new(y_vals)?;
    let bits = round(&m, &y)?;
    let h = Subgraph::new(Arc::clone(g), bits)?;
    let w = weight(g, &ord, &h)?;
    for (v, wv) in w.iter().enumerate() {
        assert!(
            *wv >= 2 * d.out_degree(v) as i64 / 3 - 1,
            "rounding guarantee violated at vertex {v}"
        );
    }
    Ok((ord, h))
}

const ALPHA_BITS: u32 = 128;
const PHI_BITS: u32 = 64;

/// Dyadic bounds `lo <= sqrt(2) - 1 < hi` with 128 fractional bits.
pub fn sqrt2_minus_1_bounds() -> &'static (Rat, Rat) {
    static CELL: OnceLock<(Rat, Rat)> = OnceLock::new();
    CELL.get_or_init(|| {
        let scale = BigInt::one() << ALPHA_BITS;
        // floor(sqrt(2 * 4^128)) = floor(sqrt(2) * 2^128)
        let s = (BigInt::from(2u32) << (2 * ALPHA_BITS)).sqrt();
        let lo = Rat::new(&s - &scale, scale.clone());
        let hi = Rat::new(&s - &scale + BigInt::one(), scale);
        (lo, hi)
    })
}

/// Conservative `floor((alpha - 2 gamma) d)` using the dyadic lower bound
/// for the irrational `alpha = sqrt(2) - 1`; never overestimates.
pub fn alpha_gamma_floor(degree: usize, gamma: &Rat) -> i64 {
    let (lo, _) = sqrt2_minus_1_bounds();
    let value = (lo - gamma - gamma) * Rat::from_integer(BigInt::from(degree));
    let f = value.floor();
    i64::try_from(f.numer()).expect("degree-scale floor fits i64")
}

#[derive(Clone, Debug)]
pub struct RandomSuccess {
    pub ordering: VertexOrdering,
    pub h: Subgraph,
    /// Index of the accepted attempt (0-based).
    pub attempt: u32,
    pub weight: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct RandomViolation {
    pub vertex: usize,
    pub degree: usize,
    pub weight: i64,
    /// The exact threshold `(alpha_hi - 2 gamma) deg(v)` the weight failed
    /// to exceed, as a rational string.
    pub threshold: String,
}

#[derive(Clone, Debug)]
pub struct RandomFailure {
    pub attempts: u32,
    /// Attempt with the fewest violated vertices.
    pub best_attempt: u32,
    pub violations: Vec<RandomViolation>,
}

#[derive(Clone, Debug)]
pub enum RandomOutcome {
    Accepted(RandomSuccess),
    Exhausted(Box<RandomFailure>),
}

/// Randomized construction: each attempt samples a uniform dyadic value
/// `phi(v)` per vertex (64 fractional bits, collisions resampled), orders
/// vertices by `phi`, and keeps each edge `uv` with `x = phi(earlier)`,
/// `y = phi(later)` independently with probability `a/(1-a)` on the region
/// `x <= a`, `y >= a + ((1-a)/a) x`, where `a` is the 128-bit dyadic
/// approximation of `sqrt(2) - 1`. An attempt is accepted only if
/// `(alpha - 2 gamma) deg(v) < weight(v)` holds at every vertex under a
/// conservative comparison (the dyadic upper bound of `alpha`), so a false
/// accept is impossible; indeterminate comparisons reject.
pub fn build_h_random(
    g: &Arc<Graph>,
    gamma: &Rat,
    seed: u64,
    max_attempts: u32,
) -> Result<RandomOutcome> {
    if gamma <= &Rat::zero() || gamma >= &Rat::one() {
        return Err(Error::InvalidParameter(format!(
            "gamma = {} outside (0,1)",
            format_rat(gamma)
        )));
    }
    let n = g.n();
    let (alpha_lo, alpha_hi) = sqrt2_minus_1_bounds();
    let slope = (Rat::one() - alpha_lo) / alpha_lo;
    let include_prob = alpha_lo / (Rat::one() - alpha_lo);
    let phi_scale = BigInt::one() << PHI_BITS;
    let thresholds: Vec<Rat> = (0..n)
        .map(|v| (alpha_hi - gamma - gamma) * Rat::from_integer(BigInt::from(g.degree(v))))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(u32, Vec<usize>, Vec<i64>)> = None;

    for attempt in 0..max_attempts {
        let phi_raw: Vec<u64> = loop {
            let draw: Vec<u64> = (0..n).map(|_| rng.random()).collect();
            let mut sorted = draw.clone();
            sorted.sort_unstable();
            if sorted.windows(2).all(|w| w[0] != w[1]) {
                break draw;
            }
        };
        let phi: Vec<Rat> = phi_raw
            .iter()
            .map(|&r| Rat::new(BigInt::from(r), phi_scale.clone()))
            .collect();
        let mut seq: Vec<usize> = (0..n).collect();
        seq.sort_by_key(|&v| phi_raw[v]);
        let ord = VertexOrdering::new(seq)?;

        let mut included = vec![false; g.m()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let (x, y) = if phi_raw[u] < phi_raw[v] {
                (&phi[u], &phi[v])
            } else {
                (&phi[v], &phi[u])
            };
            let in_region = x <= alpha_lo && y >= &(alpha_lo + &slope * x);
            if in_region {
                let r = Rat::new(BigInt::from(rng.random::<u64>()), phi_scale.clone());
                included[e] = r < include_prob;
            }
        }
        let h = Subgraph::new(Arc::clone(g), included)?;
        let w = weight(g, &ord, &h)?;
        // Isolated vertices pass vacuously: their bound admits only the
        // empty list, which needs no slack.
        let violated: Vec<usize> = (0..n)
            .filter(|&v| g.degree(v) > 0 && Rat::from_integer(BigInt::from(w[v])) <= thresholds[v])
            .collect();
        if violated.is_empty() {
            return Ok(RandomOutcome::Accepted(RandomSuccess {
                ordering: ord,
                h,
                attempt,
                weight: w,
            }));
        }
        let better = best
            .as_ref()
            .is_none_or(|(_, prev, _)| violated.len() < prev.len());
        if better {
            best = Some((attempt, violated, w));
        }
    }

    let (best_attempt, violated, w) = best.expect("max_attempts >= 1 when no vertex list is empty");
    Ok(RandomOutcome::Exhausted(Box::new(RandomFailure {
        attempts: max_attempts,
        best_attempt,
        violations: violated
            .into_iter()
            .map(|v| RandomViolation {
                vertex: v,
                degree: g.degree(v),
                weight: w[v],
                threshold: format_rat(&thresholds[v]),
            })
            .collect(),
    })))
}
