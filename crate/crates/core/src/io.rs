//! File formats.
//!
//! - Graph text: first line `n m`, then `m` lines `u v` (0-based).
//! - Graph JSON: `{"n": .., "edges": [[u,v], ..]}`.
//! - Forbidden sets JSON: `{"mode": "outdeg"|"imbalance", "sets": [[..], ..]}`.
//! - Orientation JSON: `{"dir": [0|1, ..]}` aligned with the edge list
//!   (1 = stored direction `u -> v`), plus an `arcs` mirror on output.
//! - DOT export for orientations.
//! - Edge-vertex matrix JSON: `{"rows": n, "cols": m, "entries": [[v, e, "p/q"], ..]}`;
//!   vectors as `{"len": m, "entries": [[e, "p/q"], ..]}` (missing = 0).
//! - Certificate JSON: `{"ordering": [..], "h_edges": [..], "slack": [..], "valid": ..}`.
//! - Z_p certificate JSON: `{"u": v, "arcs": [[tail, head], ..]}`.

use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::constructors::HCertificate;
use crate::error::{Error, Result};
use crate::graph::{ForbiddenMode, ForbiddenSets, Graph, Orientation, Subgraph, VertexOrdering};
use crate::matrix::{format_rat, parse_rat, Rat};
use crate::rounding::EdgeVertexMatrix;

fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serialization of plain data cannot fail")
}

fn from_json_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad JSON: {e}")))
}

// ---------------------------------------------------------------- graphs

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

pub fn graph_to_text(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn graph_from_text(s: &str) -> Result<Graph> {
    let mut numbers = s
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(format!("expected an integer, got {tok:?}")))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter();
    let n = numbers
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let m = numbers
        .next()
        .ok_or_else(|| Error::Parse("missing edge count".into()))?;
    let rest: Vec<usize> = numbers.collect();
    if rest.len() != 2 * m {
        return Err(Error::Parse(format!(
            "expected {m} edges ({} numbers), found {}",
            2 * m,
            rest.len()
        )));
    }
    let edges = rest.chunks(2).map(|c| (c[0], c[1])).collect();
    Graph::new(n, edges)
}

pub fn graph_to_json(g: &Graph) -> String {
    to_json_string(&GraphJson {
        n: g.n(),
        edges: g.edges().to_vec(),
    })
}

pub fn graph_from_json(s: &str) -> Result<Graph> {
    let gj: GraphJson = from_json_str(s)?;
    Graph::new(gj.n, gj.edges)
}

/// Accepts either format: JSON when the content starts with `{`.
pub fn graph_from_str(s: &str) -> Result<Graph> {
    if s.trim_start().starts_with('{') {
        graph_from_json(s)
    } else {
        graph_from_text(s)
    }
}

// -------------------------------------------------------- forbidden sets

#[derive(Serialize, Deserialize)]
struct ForbiddenJson {
    mode: String,
    sets: Vec<Vec<i64>>,
}

pub fn forbidden_to_json(f: &ForbiddenSets) -> String {
    to_json_string(&ForbiddenJson {
        mode: match f.mode() {
            ForbiddenMode::OutDegree => "outdeg".into(),
            ForbiddenMode::Imbalance => "imbalance".into(),
        },
        sets: (0..f.len())
            .map(|v| f.set(v).iter().copied().collect())
            .collect(),
    })
}

/// Parses and validates against `g`; the second component counts dropped
/// (unattainable) values.
pub fn forbidden_from_json(s: &str, g: &Graph) -> Result<(ForbiddenSets, usize)> {
    let fj: ForbiddenJson = from_json_str(s)?;
    let mode = match fj.mode.as_str() {
        "outdeg" => ForbiddenMode::OutDegree,
        "imbalance" => ForbiddenMode::Imbalance,
        other => {
            return Err(Error::Parse(format!(
                "mode must be \"outdeg\" or \"imbalance\", got {other:?}"
            )))
        }
    };
    ForbiddenSets::new(g, mode, fj.sets)
}

// ----------------------------------------------------------- orientations

#[derive(Serialize, Deserialize)]
struct OrientationJson {
    dir: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<(usize, usize)>>,
}

pub fn orientation_to_json(d: &Orientation) -> String {
    to_json_string(&OrientationJson {
        dir: d.dir().iter().map(|&b| b as u8).collect(),
        arcs: Some(d.arcs()),
    })
}

pub fn orientation_from_json(s: &str, g: &Arc<Graph>) -> Result<Orientation> {
    let oj: OrientationJson = from_json_str(s)?;
    Orientation::new(Arc::clone(g), oj.dir.into_iter().map(|b| b != 0).collect())
}

pub fn orientation_to_dot(d: &Orientation) -> String {
    let mut s = String::from("digraph D {\n");
    for v in 0..d.graph().n() {
        s.push_str(&format!("  {v};\n"));
    }
    for e in 0..d.graph().m() {
        let (t, h) = d.arc(e);
        s.push_str(&format!("  {t} -> {h};\n"));
    }
    s.push_str("}\n");
    s
}

// ----------------------------------------------------------- certificates

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    ordering: Vec<usize>,
    h_edges: Vec<usize>,
    slack: Vec<i64>,
    valid: bool,
}

pub fn certificate_to_json(c: &HCertificate) -> String {
    to_json_string(&CertificateJson {
        ordering: c.ordering.seq().to_vec(),
        h_edges: c.h.edge_indices(),
        slack: c.slack.clone(),
        valid: c.valid,
    })
}

#[derive(Deserialize)]
struct CertificatePartsJson {
    ordering: Vec<usize>,
    h_edges: Vec<usize>,
}

/// Reads the `(ordering, H)` pair of a certificate file; slack and
/// validity are recomputed by the caller.
pub fn certificate_parts_from_json(s: &str, g: &Arc<Graph>) -> Result<(VertexOrdering, Subgraph)> {
    let cj: CertificatePartsJson = from_json_str(s)?;
    let ord = VertexOrdering::new(cj.ordering)?;
    if ord.n() != g.n() {
        return Err(Error::Dimension(format!(
            "certificate ordering over {} vertices, graph has {}",
            ord.n(),
            g.n()
        )));
    }
    let h = Subgraph::from_edge_indices(Arc::clone(g), &cj.h_edges)?;
    Ok((ord, h))
}

// --------------------------------------------------- matrices and vectors

#[derive(Serialize, Deserialize)]
struct EvmJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

pub fn evm_to_json(m: &EdgeVertexMatrix) -> String {
    let mut entries = Vec::new();
    for (e, &(u, v)) in m.edges().iter().enumerate() {
        for w in [u, v] {
            let val = m.entry(w, e);
            if !val.is_zero() {
                entries.push((w, e, format_rat(&val)));
            }
        }
    }
    to_json_string(&EvmJson {
        rows: m.n(),
        cols: m.m(),
        entries,
    })
}

pub fn evm_from_json(s: &str, g: &Graph) -> Result<EdgeVertexMatrix> {
    let mj: EvmJson = from_json_str(s)?;
    if mj.rows != g.n() || mj.cols != g.m() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, graph has {} vertices and {} edges",
            mj.rows,
            mj.cols,
            g.n(),
            g.m()
        )));
    }
    let entries = mj
        .entries
        .into_iter()
        .map(|(v, e, s)| Ok((v, e, parse_rat(&s)?)))
        .collect::<Result<Vec<_>>>()?;
    EdgeVertexMatrix::from_entries(g, &entries)
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    len: usize,
    entries: Vec<(usize, String)>,
}

pub fn vector_to_json(values: &[Rat]) -> String {
    to_json_string(&VectorJson {
        len: values.len(),
        entries: values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, format_rat(v)))
            .collect(),
    })
}

pub fn vector_from_json(s: &str) -> Result<Vec<Rat>> {
    let vj: VectorJson = from_json_str(s)?;
    let mut out = vec![Rat::zero(); vj.len];
    for (i, val) in vj.entries {
        if i >= vj.len {
            return Err(Error::Dimension(format!("vector index {i} out of range")));
        }
        out[i] = parse_rat(&val)?;
    }
    Ok(out)
}

// --------------------------------------------------- Z_p certificate file

#[derive(Serialize, Deserialize)]
struct ZpCertJson {
    u: usize,
    arcs: Vec<(usize, usize)>,
}

pub fn zp_cert_to_json(u: usize, arcs: &[(usize, usize)]) -> String {
    to_json_string(&ZpCertJson {
        u,
        arcs: arcs.to_vec(),
    })
}

pub fn zp_cert_from_json(s: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let zj: ZpCertJson = from_json_str(s)?;
    Ok((zj.u, zj.arcs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::certify_h_condition;
    use crate::gen;
    use crate::matrix::rat;

    #[test]
    fn graph_text_and_json_roundtrip() {
        let g = gen::gnp(6, 0.5, 3).unwrap();
        assert_eq!(graph_from_text(&graph_to_text(&g)).unwrap(), g);
        assert_eq!(graph_from_json(&graph_to_json(&g)).unwrap(), g);
        assert_eq!(graph_from_str(&graph_to_json(&g)).unwrap(), g);
        assert_eq!(graph_from_str(&graph_to_text(&g)).unwrap(), g);
    }

    #[test]
    fn forbidden_roundtrip_reports_drops() {
        let g = gen::cycle(4).unwrap();
        let (f, dropped) =
            forbidden_from_json(r#"{"mode":"outdeg","sets":[[0,9],[1],[2],[]]}"#, &g).unwrap();
        assert_eq!(dropped, 1);
        let (f2, d2) = forbidden_from_json(&forbidden_to_json(&f), &g).unwrap();
        assert_eq!(d2, 0);
        assert_eq!(f, f2);
    }

    #[test]
    fn orientation_json_and_dot() {
        let g = Arc::new(gen::cycle(3).unwrap());
        let d = Orientation::new(Arc::clone(&g), vec![true, false, true]).unwrap();
        let back = orientation_from_json(&orientation_to_json(&d), &g).unwrap();
        assert_eq!(back, d);
        let dot = orientation_to_dot(&d);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("0 -> 1;"));
        assert!(dot.contains("2 -> 1;"));
    }

    #[test]
    fn certificate_roundtrip() {
        let g = Arc::new(gen::complete(4).unwrap());
        let ord = VertexOrdering::identity(4);
        let h = Subgraph::from_edge_indices(Arc::clone(&g), &[0, 2]).unwrap();
        let f = ForbiddenSets::empty(4, ForbiddenMode::OutDegree);
        let cert = certify_h_condition(&g, &ord, &h, &f).unwrap();
        let json = certificate_to_json(&cert);
        let (ord2, h2) = certificate_parts_from_json(&json, &g).unwrap();
        assert_eq!(ord2.seq(), cert.ordering.seq());
        assert_eq!(h2.edge_indices(), cert.h.edge_indices());
    }

    #[test]
    fn matrix_and_vector_roundtrip() {
        let g = gen::cycle(3).unwrap();
        let m = EdgeVertexMatrix::from_entries(
            &g,
            &[(0, 0, rat(1, 2)), (1, 0, rat(-2, 1)), (1, 1, rat(3, 4))],
        )
        .unwrap();
        let m2 = evm_from_json(&evm_to_json(&m), &g).unwrap();
        assert_eq!(m, m2);
        let v = vec![rat(1, 3), rat(0, 1), rat(5, 6)];
        assert_eq!(vector_from_json(&vector_to_json(&v)).unwrap(), v);
    }

    #[test]
    fn zp_cert_roundtrip() {
        let arcs = vec![(0, 1), (2, 1)];
        let (u, back) = zp_cert_from_json(&zp_cert_to_json(3, &arcs)).unwrap();
        assert_eq!(u, 3);
        assert_eq!(back, arcs);
    }
}
