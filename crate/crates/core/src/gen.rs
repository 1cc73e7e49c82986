//! Deterministic graph generators and seeded random corpora.

use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Orientation};

pub fn complete(n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges)
}

/// `K_n` minus the matching `{0,1}, {2,3}, ...` (a maximum matching).
pub fn complete_minus_matching(n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if v == u + 1 && u % 2 == 0 {
                continue;
            }
            edges.push((u, v));
        }
    }
    Graph::new(n, edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, edges)
}

/// Erdos-Renyi `G(n, p)`, reproducible per seed.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random bipartite graph on parts of size `n1` and `n2`, reproducible.
pub fn bipartite(n1: usize, n2: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n1 {
        for v in 0..n2 {
            if rng.random::<f64>() < p {
                edges.push((u, n1 + v));
            }
        }
    }
    Graph::new(n1 + n2, edges)
}

/// `G(n, p)` conditioned for the certificate pipelines: missing edges are
/// added at minimum-degree vertices until every degree is at least
/// `min_degree`, and the draw is repeated while the graph exceeds
/// `max_edges` (the oracle guard). Requires `min_degree < n`.
pub fn gnp_min_degree(
    n: usize,
    p: f64,
    min_degree: usize,
    max_edges: usize,
    rng: &mut impl RngCore,
) -> Result<Graph> {
    if min_degree >= n {
        return Err(Error::InvalidParameter(format!(
            "min degree {min_degree} unreachable on {n} vertices"
        )));
    }
    loop {
        let mut g = gnp(n, p, rng.next_u64())?;
        while let Some(v) = (0..n)
            .filter(|&v| g.degree(v) < min_degree)
            .min_by_key(|&v| (g.degree(v), v))
        {
            let candidates: Vec<usize> = (0..n).filter(|&w| w != v && !g.has_edge(v, w)).collect();
            let w = candidates[rng.random_range(0..candidates.len())];
            let mut edges = g.edges().to_vec();
            edges.push((v.min(w), v.max(w)));
            g = Graph::new(n, edges)?;
        }
        if g.m() <= max_edges {
            return Ok(g);
        }
    }
}

/// Uniformly random direction bits.
pub fn random_orientation(g: &Arc<Graph>, rng: &mut impl RngCore) -> Orientation {
    let dir: Vec<bool> = (0..g.m()).map(|_| rng.next_u32() & 1 == 1).collect();
    Orientation::new(Arc::clone(g), dir).expect("bit count matches")
}

/// Random orientation conditioned on `deg+(v) >= min_out` everywhere:
/// rejection sampling with a cap, then greedy repair (re-aim arcs from
/// surplus to deficient vertices) as a deterministic fallback.
pub fn random_orientation_min_out(
    g: &Arc<Graph>,
    min_out: usize,
    rng: &mut impl RngCore,
) -> Option<Orientation> {
    if (0..g.n()).any(|v| g.degree(v) < min_out) {
        return None;
    }
    for _ in 0..1000 {
        let d = random_orientation(g, rng);
        if (0..g.n()).all(|v| d.out_degree(v) >= min_out) {
            return Some(d);
        }
    }
    // Repair: flip arcs into a deficient vertex when the tail has surplus.
    let mut dir = random_orientation(g, rng).dir().to_vec();
    loop {
        let out = |dir: &[bool], v: usize| -> usize {
            g.neighbors(v)
                .iter()
                .filter(|&&(_, e)| {
                    let (a, _) = g.endpoints(e);
                    (a == v) == dir[e]
                })
                .count()
        };
        let Some(v) = (0..g.n()).find(|&v| out(&dir, v) < min_out) else {
            return Some(Orientation::new(Arc::clone(g), dir).expect("bit count matches"));
        };
        let flip = g.neighbors(v).iter().find(|&&(w, e)| {
            let (a, _) = g.endpoints(e);
            let v_is_tail = (a == v) == dir[e];
            !v_is_tail && out(&dir, w) > min_out
        });
        match flip {
            Some(&(_, e)) => dir[e] = !dir[e],
            None => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generator_shapes() {
        assert_eq!(complete(5).unwrap().m(), 10);
        assert_eq!(cycle(3).unwrap().m(), 3);
        assert!(cycle(2).is_err());
        let c4 = complete_minus_matching(4).unwrap();
        assert_eq!(c4.m(), 4);
        assert!(c4.degrees().iter().all(|&d| d == 2));
        let k5m = complete_minus_matching(5).unwrap();
        assert_eq!(k5m.m(), 8);
    }

    #[test]
    fn gnp_is_reproducible() {
        let a = gnp(8, 0.5, 7).unwrap();
        let b = gnp(8, 0.5, 7).unwrap();
        assert_eq!(a, b);
        let c = gnp(8, 0.5, 8).unwrap();
        assert!(a != c || a.m() == c.m()); // different seed, almost surely different
    }

    #[test]
    fn min_degree_patching_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let g = gnp_min_degree(7, 0.3, 3, 18, &mut rng).unwrap();
            assert!(g.degrees().iter().all(|&d| d >= 3));
            assert!(g.m() <= 18);
        }
    }

    #[test]
    fn conditioned_orientations_have_min_out_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let g = Arc::new(gnp_min_degree(7, 0.5, 4, 21, &mut rng).unwrap());
            let d = random_orientation_min_out(&g, 2, &mut rng).unwrap();
            assert!((0..7).all(|v| d.out_degree(v) >= 2));
        }
    }

    #[test]
    fn bipartite_has_no_cross_part_edges() {
        let g = bipartite(3, 4, 0.8, 9).unwrap();
        for &(u, v) in g.edges() {
            assert!(u < 3 && v >= 3);
        }
    }
}
