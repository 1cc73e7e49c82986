//! Coefficient extraction through permanents of multiplied matrices, its
//! brute-force polynomial-expansion oracle, Eulerian subgraph counting,
//! Alon-Tarsi certificates, the Z_p-connectivity certificate, and
//! set-inclusion matrices.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{check_guard, Error, Result};
use crate::graph::{ForbiddenSets, Graph, Orientation, Subgraph, VertexOrdering};
use crate::matrix::{factorial, ExactMatrix, Rat};

/// Signed incidence matrix of the acyclic reference orientation induced by
/// `ord`: +1 at the earlier endpoint of each edge, -1 at the later one.
/// Every column sums to zero.
pub fn incidence_matrix(g: &Graph, ord: &VertexOrdering) -> ExactMatrix {
    let mut m = ExactMatrix::zero(g.n(), g.m());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (earlier, later) = if ord.pos(u) < ord.pos(v) {
            (u, v)
        } else {
            (v, u)
        };
        m.set(earlier, e, Rat::one());
        m.set(later, e, -Rat::one());
    }
    m
}

/// Re-export of the row/column multiplication as a free function.
pub fn multiplied_matrix(a: &ExactMatrix, alpha: &[usize], beta: &[usize]) -> Result<ExactMatrix> {
    a.multiplied(alpha, beta)
}

/// Permanent of a square rational matrix (Ryser, exact).
pub fn permanent(a: &ExactMatrix) -> Result<Rat> {
    a.permanent()
}

/// The two dual monomial coefficients determined by one permanent:
/// `coeff_y` is the coefficient of `y^beta` in
/// `g = prod_i (sum_j a_ij y_j)^alpha_i`, and `coeff_x` the coefficient of
/// `x^alpha` in `g* = prod_j (sum_i a_ij x_i)^beta_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCoefficients {
    pub permanent: Rat,
    pub coeff_y: Rat,
    pub coeff_x: Rat,
}

const COEFF_NORM_GUARD: u64 = 22;
const NAIVE_NORM_GUARD: u64 = 12;
const EULERIAN_GUARD: u64 = 26;
const AT_NUMBER_GUARD: u64 = 20;

/// Evaluates both dual coefficients via `perm(A^{alpha,beta})`.
/// Requires `||alpha||_1 = ||beta||_1`.
pub fn coeff_via_permanent(
    a: &ExactMatrix,
    alpha: &[usize],
    beta: &[usize],
) -> Result<DualCoefficients> {
    let na: usize = alpha.iter().sum();
    let nb: usize = beta.iter().sum();
    if na != nb {
        return Err(Error::Dimension(format!(
            "multiplicity norms differ: {na} != {nb}"
        )));
    }
    check_guard("coefficient norm", na as u64, COEFF_NORM_GUARD)?;
    let perm = a.multiplied(alpha, beta)?.permanent()?;
    let alpha_fact: BigInt = alpha.iter().map(|&k| factorial(k)).product();
    let beta_fact: BigInt = beta.iter().map(|&k| factorial(k)).product();
    Ok(DualCoefficients {
        coeff_y: &perm / Rat::from_integer(beta_fact),
        coeff_x: &perm / Rat::from_integer(alpha_fact),
        permanent: perm,
    })
}

/// Coefficient of `y^beta` in `prod_i (sum_j a_ij y_j)^alpha_i` by direct
/// sparse expansion, pruned to the box below `beta`. Oracle for
/// [`coeff_via_permanent`]; guarded at total degree 12.
pub fn naive_coeff_y(a: &ExactMatrix, alpha: &[usize], beta: &[usize]) -> Result<Rat> {
    if alpha.len() != a.rows() || beta.len() != a.cols() {
        return Err(Error::Dimension("multiplicity lengths".into()));
    }
    let total: usize = alpha.iter().sum();
    check_guard("naive expansion degree", total as u64, NAIVE_NORM_GUARD)?;
    if total != beta.iter().sum::<usize>() {
        // The polynomial is homogeneous of degree ||alpha||_1.
        return Ok(Rat::zero());
    }
    let m = a.cols();
    let mut poly: HashMap<Vec<u16>, Rat> = HashMap::new();
    poly.insert(vec![0u16; m], Rat::one());
    for (i, &mult) in alpha.iter().enumerate() {
        for _ in 0..mult {
            let mut next: HashMap<Vec<u16>, Rat> = HashMap::with_capacity(poly.len() * 2);
            for (exp, c) in &poly {
                for j in 0..m {
                    let aij = a.get(i, j);
                    if aij.is_zero() || exp[j] as usize >= beta[j] {
                        continue;
                    }
                    let mut e2 = exp.clone();
                    e2[j] += 1;
                    let term = c * aij;
                    *next.entry(e2).or_insert_with(Rat::zero) += term;
                }
            }
            poly = next;
        }
    }
    let target: Vec<u16> = beta.iter().map(|&b| b as u16).collect();
    Ok(poly.remove(&target).unwrap_or_else(Rat::zero))
}

/// Coefficient of `x^alpha` in `prod_j (sum_i a_ij x_i)^beta_j`, the dual
/// expansion (same machinery over the transpose).
pub fn naive_coeff_x(a: &ExactMatrix, alpha: &[usize], beta: &[usize]) -> Result<Rat> {
    naive_coeff_y(&a.transpose(), beta, alpha)
}

/// Counts subsets of the arc multiset that are Eulerian (in-degree equals
/// out-degree at every vertex within the subset), split by parity of the
/// subset size: `(even, odd)`. The empty subset counts as even.
pub fn eulerian_counts_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<(u64, u64)> {
    check_guard(
        "eulerian enumeration arcs",
        arcs.len() as u64,
        EULERIAN_GUARD,
    )?;
    for &(t, h) in arcs {
        if t >= n || h >= n || t == h {
            return Err(Error::InvalidGraph(format!("bad arc ({t},{h})")));
        }
    }
    // Deciding arcs grouped by their larger endpoint lets low vertices
    // finalize early, so the imbalance prune fires sooner.
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by_key(|&i| {
        let (t, h) = arcs[i];
        (t.max(h), t.min(h))
    });
    let mut rem = vec![0i64; n];
    for &(t, h) in arcs {
        rem[t] += 1;
        rem[h] += 1;
    }
    let mut imb = vec![0i64; n];
    let mut counts = (0u64, 0u64);

    fn rec(
        arcs: &[(usize, usize)],
        order: &[usize],
        idx: usize,
        rem: &mut [i64],
        imb: &mut [i64],
        odd: bool,
        counts: &mut (u64, u64),
    ) {
        if idx == order.len() {
            if odd {
                counts.1 += 1;
            } else {
                counts.0 += 1;
            }
            return;
        }
        let (t, h) = arcs[order[idx]];
        rem[t] -= 1;
        rem[h] -= 1;
        // Exclude the arc.
        if imb[t].abs() <= rem[t] && imb[h].abs() <= rem[h] {
            rec(arcs, order, idx + 1, rem, imb, odd, counts);
        }
        // Include the arc.
        imb[t] += 1;
        imb[h] -= 1;
        if imb[t].abs() <= rem[t] && imb[h].abs() <= rem[h] {
            rec(arcs, order, idx + 1, rem, imb, !odd, counts);
        }
        imb[t] -= 1;
        imb[h] += 1;
        rem[t] += 1;
        rem[h] += 1;
    }

    rec(arcs, &order, 0, &mut rem, &mut imb, false, &mut counts);
    Ok(counts)
}

/// `EE(D) - EO(D)` over arc lists (multigraphs allowed).
pub fn eulerian_diff_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<i64> {
    let (ee, eo) = eulerian_counts_arcs(n, arcs)?;
    Ok(ee as i64 - eo as i64)
}

/// `(EE(D), EO(D))` for an orientation of a simple graph.
pub fn eulerian_counts(d: &Orientation) -> Result<(u64, u64)> {
    eulerian_counts_arcs(d.graph().n(), &d.arcs())
}

/// `EE(D) - EO(D)` for an orientation of a simple graph.
pub fn eulerian_diff(d: &Orientation) -> Result<i64> {
    let (ee, eo) = eulerian_counts(d)?;
    Ok(ee as i64 - eo as i64)
}

/// The Alon-Tarsi sufficient condition: true iff `d` (an orientation of
/// the spanning subgraph `h`) has `EE - EO != 0` and `|F(v)| <= deg+(v)`
/// in `h` at every vertex. True certifies that the ambient graph has an
/// F-avoiding orientation.
pub fn at_condition_check(
    g: &Graph,
    h: &Subgraph,
    d: &Orientation,
    f: &ForbiddenSets,
) -> Result<bool> {
    if h.graph().as_ref() != g || d.graph().as_ref() != g {
        return Err(Error::Dimension(
            "subgraph/orientation over a different graph".into(),
        ));
    }
    if f.len() != g.n() {
        return Err(Error::Dimension("forbidden sets cover wrong count".into()));
    }
    let arcs: Vec<(usize, usize)> = (0..g.m())
        .filter(|&e| h.contains(e))
        .map(|e| d.arc(e))
        .collect();
    let mut out = vec![0usize; g.n()];
    for &(t, _) in &arcs {
        out[t] += 1;
    }
    if (0..g.n()).any(|v| f.size(v) > out[v]) {
        return Ok(false);
    }
    Ok(eulerian_diff_arcs(g.n(), &arcs)? != 0)
}

/// The Alon-Tarsi number: minimum `k` such that some orientation with
/// `EE - EO != 0` has maximum out-degree below `k`. Lexicographic
/// enumeration over direction bits with a max-out-degree bound.
pub fn at_number(g: &Graph) -> Result<usize> {
    check_guard(
        "orientation enumeration edges",
        g.m() as u64,
        AT_NUMBER_GUARD,
    )?;
    let n = g.n();
    let m = g.m();
    // The acyclic orientation along vertex indices is always Alon-Tarsi.
    let mut seed_out = vec![0usize; n];
    for &(u, v) in g.edges() {
        seed_out[u.min(v)] += 1;
    }
    let mut best = seed_out.into_iter().max().unwrap_or(0);

    fn rec(
        g: &Graph,
        e: usize,
        out: &mut [usize],
        arcs: &mut Vec<(usize, usize)>,
        current_max: usize,
        best: &mut usize,
    ) {
        if current_max >= *best {
            return;
        }
        if e == g.m() {
            if eulerian_diff_arcs(g.n(), arcs).expect("guard already checked") != 0 {
                *best = current_max;
            }
            return;
        }
        let (u, v) = g.endpoints(e);
        for (t, h) in [(u, v), (v, u)] {
            out[t] += 1;
            arcs.push((t, h));
            rec(g, e + 1, out, arcs, current_max.max(out[t]), best);
            arcs.pop();
            out[t] -= 1;
        }
    }

    let mut out = vec![0usize; n];
    let mut arcs = Vec::with_capacity(m);
    rec(g, 0, &mut out, &mut arcs, 0, &mut best);
    Ok(best + 1)
}

/// Z_p-connectivity certificate. `arcs` orients a sub-multiset of the
/// edges of `g` blown up at most `p-2` times each. Returns true iff the
/// multiset has exactly `(p-1)(n-1)` arcs, every vertex except `u` has
/// out-degree `p-1`, and `EE - EO` of the oriented multigraph is nonzero
/// mod `p` -- which together certify that `g` is Z_p-connected.
pub fn zp_certificate(g: &Graph, p: u32, arcs: &[(usize, usize)], u: usize) -> Result<bool> {
    if !matches!(p, 3 | 5 | 7) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} not in {{3, 5, 7}}"
        )));
    }
    if u >= g.n() {
        return Err(Error::InvalidParameter(format!("vertex {u} out of range")));
    }
    let mut multiplicity: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for &(t, h) in arcs {
        if t >= g.n() || h >= g.n() || !g.has_edge(t, h) {
            return Err(Error::InvalidParameter(format!(
                "arc ({t},{h}) is not over an edge of the graph"
            )));
        }
        let key = (t.min(h), t.max(h));
        let c = multiplicity.entry(key).or_insert(0);
        *c += 1;
        if *c > p - 2 {
            return Err(Error::InvalidParameter(format!(
                "edge {key:?} used more than p-2 = {} times",
                p - 2
            )));
        }
    }
    if arcs.len() != (p as usize - 1) * (g.n() - 1) {
        return Ok(false);
    }
    let mut out = vec![0usize; g.n()];
    for &(t, _) in arcs {
        out[t] += 1;
    }
    if (0..g.n()).any(|v| v != u && out[v] != p as usize - 1) {
        return Ok(false);
    }
    let diff = eulerian_diff_arcs(g.n(), arcs)?;
    Ok(diff.rem_euclid(p as i64) != 0)
}

/// The set-inclusion matrix: rows indexed by the `b`-subsets and columns
/// by the `d`-subsets of `{0, .., ground-1}` in lexicographic order, entry
/// 1 exactly at containments.
pub fn inclusion_matrix(ground: usize, d: usize, b: usize) -> Result<ExactMatrix> {
    if d > b || b > ground {
        return Err(Error::InvalidParameter(format!(
            "need d <= b <= ground, got d={d}, b={b}, ground={ground}"
        )));
    }
    let rows = combinations(ground, b);
    let cols = combinations(ground, d);
    let mut m = ExactMatrix::zero(rows.len(), cols.len());
    for (i, y) in rows.iter().enumerate() {
        for (j, dd) in cols.iter().enumerate() {
            if dd & y == *dd {
                m.set(i, j, Rat::one());
            }
        }
    }
    Ok(m)
}

/// Exact rank over the rationals.
pub fn rational_rank(a: &ExactMatrix) -> usize {
    a.rank()
}

/// All `k`-subsets of `{0..ground}` as bitmasks, lexicographic by the
/// sorted element lists.
fn combinations(ground: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > ground {
        return out;
    }
    loop {
        out.push(cur.iter().fold(0u32, |acc, &i| acc | 1 << i));
        // Advance the lexicographically next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + ground - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::ForbiddenMode;
    use crate::matrix::rat_int;
    use num::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn incidence_matrix_basics() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let m = incidence_matrix(&g, &VertexOrdering::identity(2));
        assert_eq!(*m.get(0, 0), rat_int(1));
        assert_eq!(*m.get(1, 0), rat_int(-1));
        let c3 = gen::cycle(3).unwrap();
        let m3 = incidence_matrix(&c3, &VertexOrdering::identity(3));
        for e in 0..3 {
            let col_sum: Rat = (0..3).map(|v| m3.get(v, e).clone()).sum();
            assert!(col_sum.is_zero());
        }
        assert_eq!(m3.rank(), 2);
    }

    #[test]
    fn empty_multiplicities_give_the_empty_product() {
        let a = ExactMatrix::from_i64_rows(&[vec![5, -1], vec![2, 7]]).unwrap();
        let c = coeff_via_permanent(&a, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(c.permanent, rat_int(1));
        assert_eq!(c.coeff_y, rat_int(1));
        assert_eq!(c.coeff_x, rat_int(1));
    }

    #[test]
    fn norm_mismatch_is_rejected() {
        let a = ExactMatrix::from_i64_rows(&[vec![1, 1]]).unwrap();
        assert!(coeff_via_permanent(&a, &[2], &[1, 0]).is_err());
    }

    #[test]
    fn naive_single_row_is_a_multinomial() {
        // (2y_0 - 3y_1)^4: coeff of y0^2 y1^2 = C(4,2) * 4 * 9 = 216
        let a = ExactMatrix::from_i64_rows(&[vec![2, -3]]).unwrap();
        let c = naive_coeff_y(&a, &[4], &[2, 2]).unwrap();
        assert_eq!(c, rat_int(216));
        // alpha = 0 gives the empty product.
        assert_eq!(naive_coeff_y(&a, &[0], &[0, 0]).unwrap(), rat_int(1));
    }

    #[test]
    fn duality_identity_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..120 {
            let n = rng.random_range(1..=4);
            let m = rng.random_range(1..=4);
            let a = ExactMatrix::from_i64_rows(
                &(0..n)
                    .map(|_| (0..m).map(|_| rng.random_range(-3..=3)).collect())
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let norm = rng.random_range(0..=6);
            let alpha = random_composition(&mut rng, norm, n);
            let beta = random_composition(&mut rng, norm, m);
            let dual = coeff_via_permanent(&a, &alpha, &beta).unwrap();
            let ny = naive_coeff_y(&a, &alpha, &beta).unwrap();
            let nx = naive_coeff_x(&a, &alpha, &beta).unwrap();
            let beta_fact: BigInt = beta.iter().map(|&k| factorial(k)).product();
            let alpha_fact: BigInt = alpha.iter().map(|&k| factorial(k)).product();
            assert_eq!(&ny * Rat::from_integer(beta_fact), dual.permanent);
            assert_eq!(&nx * Rat::from_integer(alpha_fact), dual.permanent);
            assert_eq!(dual.coeff_y, ny);
            assert_eq!(dual.coeff_x, nx);
        }
    }

    fn random_composition(rng: &mut ChaCha8Rng, total: usize, parts: usize) -> Vec<usize> {
        let mut v = vec![0usize; parts];
        for _ in 0..total {
            v[rng.random_range(0..parts)] += 1;
        }
        v
    }

    #[test]
    fn eulerian_counts_on_small_digraphs() {
        // Single arc: only the empty subset.
        assert_eq!(eulerian_counts_arcs(2, &[(0, 1)]).unwrap(), (1, 0));
        // Directed triangle: empty (even) and the full cycle (odd).
        let tri = [(0, 1), (1, 2), (2, 0)];
        assert_eq!(eulerian_counts_arcs(3, &tri).unwrap(), (1, 1));
        assert_eq!(eulerian_diff_arcs(3, &tri).unwrap(), 0);
    }

    #[test]
    fn bipartite_orientations_have_no_odd_eulerian_subgraphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let g = loop {
                let g = gen::bipartite(
                    rng.random_range(1..=4),
                    rng.random_range(1..=4),
                    0.7,
                    rng.random(),
                )
                .unwrap();
                if g.m() <= 10 {
                    break Arc::new(g);
                }
            };
            let dir: Vec<bool> = (0..g.m()).map(|_| rng.random()).collect();
            let d = Orientation::new(Arc::clone(&g), dir).unwrap();
            let (ee, eo) = eulerian_counts(&d).unwrap();
            assert_eq!(eo, 0);
            assert!(ee >= 1);
        }
    }

    #[test]
    fn at_condition_on_single_arc_and_triangle() {
        let g = Arc::new(Graph::new(2, vec![(0, 1)]).unwrap());
        let h = Subgraph::full(Arc::clone(&g));
        let d = Orientation::new(Arc::clone(&g), vec![true]).unwrap();
        let (f, _) =
            ForbiddenSets::new(&g, ForbiddenMode::OutDegree, vec![vec![1], vec![]]).unwrap();
        assert!(at_condition_check(&g, &h, &d, &f).unwrap());

        let t = Arc::new(gen::cycle(3).unwrap());
        let ht = Subgraph::full(Arc::clone(&t));
        let dt = Orientation::new(Arc::clone(&t), vec![true, true, true]).unwrap();
        let (ft, _) =
            ForbiddenSets::new(&t, ForbiddenMode::OutDegree, vec![vec![0], vec![], vec![]])
                .unwrap();
        // EE - EO = 0 on the directed triangle.
        assert!(!at_condition_check(&t, &ht, &dt, &ft).unwrap());
    }

    #[test]
    fn at_number_regressions() {
        let c4 = gen::complete_minus_matching(4).unwrap();
        assert_eq!(at_number(&c4).unwrap(), 2);
        let k5m = gen::complete_minus_matching(5).unwrap();
        assert_eq!(at_number(&k5m).unwrap(), 3);
        let edgeless = Graph::new(3, vec![]).unwrap();
        assert_eq!(at_number(&edgeless).unwrap(), 1);
    }

    #[test]
    fn zp_certificate_shape_checks() {
        let g = gen::complete(4).unwrap();
        // Wrong arc count: 5 != 2 * 3.
        let arcs = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];
        assert!(!zp_certificate(&g, 3, &arcs, 3).unwrap());
        // Right count, wrong out-degrees.
        let arcs6 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert!(!zp_certificate(&g, 3, &arcs6, 3).unwrap());
        // Malformed: arc not over an edge.
        let c4 = gen::cycle(4).unwrap();
        assert!(zp_certificate(&c4, 3, &[(0, 2)], 0).is_err());
        // Malformed: multiplicity above p-2.
        assert!(zp_certificate(&g, 3, &[(0, 1), (1, 0)], 3).is_err());
    }

    #[test]
    fn zp_certificate_accept_iff_diff_nonzero_mod_p() {
        let g = gen::complete(4).unwrap();
        // All (2,2,2,0)-orientations of K_4: acceptance must equal the
        // mod-3 test on EE - EO directly.
        for bits in 0..64u32 {
            let arcs: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| if bits >> e & 1 == 1 { (u, v) } else { (v, u) })
                .collect();
            let mut out = [0usize; 4];
            for &(t, _) in &arcs {
                out[t] += 1;
            }
            if out[..3] != [2, 2, 2] {
                continue;
            }
            let accepted = zp_certificate(&g, 3, &arcs, 3).unwrap();
            let diff = eulerian_diff_arcs(4, &arcs).unwrap();
            assert_eq!(accepted, diff.rem_euclid(3) != 0);
        }
    }

    #[test]
    fn inclusion_matrix_examples() {
        let m = inclusion_matrix(4, 1, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 4));
        assert_eq!(rational_rank(&m), 4);
        let sq = inclusion_matrix(5, 2, 2).unwrap();
        assert_eq!((sq.rows(), sq.cols()), (10, 10));
        assert_eq!(rational_rank(&sq), 10);
        let m53 = inclusion_matrix(5, 2, 3).unwrap();
        assert_eq!(rational_rank(&m53), 10);
        assert!(inclusion_matrix(3, 2, 1).is_err());
    }

    #[test]
    fn gottlieb_full_column_rank_in_range() {
        for ground in 1..=7usize {
            for d in 0..=ground {
                for b in d..=ground.saturating_sub(d) {
                    let m = inclusion_matrix(ground, d, b).unwrap();
                    assert_eq!(
                        rational_rank(&m),
                        m.cols(),
                        "rank deficit at ground={ground}, d={d}, b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn permanent_route_matches_eulerian_difference_on_c4() {
        let g = gen::complete_minus_matching(4).unwrap(); // a 4-cycle
        let ord = VertexOrdering::identity(4);
        let inc = incidence_matrix(&g, &ord);
        // Cyclic orientation with out-degree 1 everywhere.
        let mut dir = Vec::new();
        let mut out = [0usize; 4];
        for &(u, v) in g.edges() {
            dir.push(out[u] == 0);
            if out[u] == 0 {
                out[u] += 1;
            } else {
                out[v] += 1;
            }
        }
        let d = Orientation::new(Arc::new(g), dir).unwrap();
        let alpha = d.out_degrees();
        let beta = vec![1usize; 4];
        let dual = coeff_via_permanent(&inc, &alpha, &beta).unwrap();
        let diff = eulerian_diff(&d).unwrap();
        assert_eq!(dual.coeff_x.abs(), rat_int(diff.abs()));
    }

    /// Naive reference: sweep all 2^m arc subsets.
    fn eulerian_counts_naive(n: usize, arcs: &[(usize, usize)]) -> (u64, u64) {
        let mut counts = (0u64, 0u64);
        for bits in 0u64..(1u64 << arcs.len()) {
            let mut imb = vec![0i64; n];
            for (i, &(t, h)) in arcs.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    imb[t] += 1;
                    imb[h] -= 1;
                }
            }
            if imb.iter().all(|&x| x == 0) {
                if bits.count_ones() % 2 == 0 {
                    counts.0 += 1;
                } else {
                    counts.1 += 1;
                }
            }
        }
        counts
    }

    #[test]
    fn pruned_eulerian_counts_match_the_naive_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..40 {
            let n = rng.random_range(2..=6);
            let g = loop {
                let g = gen::gnp(n, 0.6, rng.random()).unwrap();
                if g.m() <= 12 {
                    break g;
                }
            };
            let arcs: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .map(|&(u, v)| if rng.random() { (u, v) } else { (v, u) })
                .collect();
            assert_eq!(
                eulerian_counts_arcs(n, &arcs).unwrap(),
                eulerian_counts_naive(n, &arcs)
            );
        }
        // Multigraph arcs too.
        let arcs = [(0, 1), (0, 1), (1, 0), (1, 2), (2, 0)];
        assert_eq!(
            eulerian_counts_arcs(3, &arcs).unwrap(),
            eulerian_counts_naive(3, &arcs)
        );
    }

    #[test]
    fn branch_and_bound_at_number_matches_plain_enumeration() {
        fn at_number_naive(g: &Graph) -> usize {
            let mut best = usize::MAX;
            for bits in 0u64..(1u64 << g.m()) {
                let arcs: Vec<(usize, usize)> = g
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(e, &(u, v))| if bits >> e & 1 == 1 { (u, v) } else { (v, u) })
                    .collect();
                let mut out = vec![0usize; g.n()];
                for &(t, _) in &arcs {
                    out[t] += 1;
                }
                let max_out = out.into_iter().max().unwrap_or(0);
                if max_out + 1 < best && eulerian_diff_arcs(g.n(), &arcs).unwrap() != 0 {
                    best = max_out + 1;
                }
            }
            best
        }
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..15 {
            let n = rng.random_range(2..=5);
            let g = loop {
                let g = gen::gnp(n, 0.7, rng.random()).unwrap();
                if g.m() <= 9 {
                    break g;
                }
            };
            assert_eq!(at_number(&g).unwrap(), at_number_naive(&g));
        }
    }

    #[test]
    fn zp_certificate_validations_for_p5() {
        let g = gen::cycle(3).unwrap();
        // Multiplicity above p-2 = 3 is malformed.
        let arcs = [(0, 1); 4];
        assert!(zp_certificate(&g, 5, &arcs, 2).is_err());
        // Wrong arc count (needs 4*(3-1) = 8) is a clean reject.
        assert!(!zp_certificate(&g, 5, &[(0, 1), (1, 2)], 0).unwrap());
        // p outside {3,5,7} is a parameter error.
        assert!(zp_certificate(&g, 4, &[(0, 1)], 0).is_err());
    }

    #[test]
    fn eulerian_guard_fires() {
        let arcs: Vec<(usize, usize)> = (0..27).map(|i| (i, i + 1)).collect();
        assert!(matches!(
            eulerian_counts_arcs(28, &arcs),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
