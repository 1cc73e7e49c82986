//! Python bindings: the main types and operations, in-process.
//!
//! Exact rationals cross the boundary as strings ("p/q" or "p"); plain
//! Python ints and `fractions.Fraction` values stringify to exactly that
//! format, so they can be passed directly where a rational is expected.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use orientavoid_core as core;
use orientavoid_core::algebra;
use orientavoid_core::constructors::{self, RandomOutcome};
use orientavoid_core::gen;
use orientavoid_core::io;
use orientavoid_core::matrix::{format_rat, parse_rat, ExactMatrix, Rat};
use orientavoid_core::oracle;
use orientavoid_core::rounding;
use orientavoid_core::{ForbiddenMode, ForbiddenSets, Graph as CoreGraph, VertexOrdering};

fn err(e: core::Error) -> PyErr {
    if e.is_guard() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rat_from_py(value: &Bound<'_, PyAny>) -> PyResult<Rat> {
    // int, Fraction, and "p/q" strings all stringify to parseable form.
    let s = value.str()?.to_string();
    parse_rat(&s).map_err(err)
}

fn matrix_from_py(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<ExactMatrix> {
    let converted: Vec<Vec<Rat>> = rows
        .into_iter()
        .map(|row| row.iter().map(rat_from_py).collect())
        .collect::<PyResult<_>>()?;
    ExactMatrix::from_rows(converted).map_err(err)
}

fn ordering_from_py(seq: Vec<usize>) -> PyResult<VertexOrdering> {
    VertexOrdering::new(seq).map_err(err)
}

/// A simple undirected graph with stable vertex and edge indexing.
#[pyclass(frozen)]
struct Graph {
    inner: Arc<CoreGraph>,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Graph {
            inner: Arc::new(CoreGraph::new(n, edges).map_err(err)?),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn degree(&self, v: usize) -> usize {
        self.inner.degree(v)
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees().to_vec()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn to_text(&self) -> String {
        io::graph_to_text(&self.inner)
    }

    fn to_json(&self) -> String {
        io::graph_to_json(&self.inner)
    }

    #[staticmethod]
    fn from_text(s: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: Arc::new(io::graph_from_str(s).map_err(err)?),
        })
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// A direction bit per edge; `dir[e]` true orients edge `e` along its
/// stored pair.
#[pyclass(frozen)]
struct Orientation {
    inner: core::Orientation,
}

#[pymethods]
impl Orientation {
    #[new]
    fn new(graph: &Graph, dir: Vec<bool>) -> PyResult<Self> {
        Ok(Orientation {
            inner: core::Orientation::new(Arc::clone(&graph.inner), dir).map_err(err)?,
        })
    }

    #[getter]
    fn dir(&self) -> Vec<bool> {
        self.inner.dir().to_vec()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs()
    }

    fn out_degree(&self, v: usize) -> usize {
        self.inner.out_degree(v)
    }

    fn in_degree(&self, v: usize) -> usize {
        self.inner.in_degree(v)
    }

    fn out_degrees(&self) -> Vec<usize> {
        self.inner.out_degrees()
    }

    fn imbalance(&self, v: usize) -> i64 {
        self.inner.imbalance(v)
    }

    fn is_f_avoiding(&self, f: &PyForbiddenSets) -> PyResult<bool> {
        self.inner.is_f_avoiding(&f.inner).map_err(err)
    }

    fn to_dot(&self) -> String {
        io::orientation_to_dot(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Orientation(arcs={:?})", self.inner.arcs())
    }
}

/// Per-vertex forbidden out-degrees or imbalances. Unattainable values
/// are dropped; `dropped` reports how many.
#[pyclass(frozen, name = "ForbiddenSets")]
struct PyForbiddenSets {
    inner: ForbiddenSets,
    dropped: usize,
}

#[pymethods]
impl PyForbiddenSets {
    #[new]
    fn new(graph: &Graph, mode: &str, sets: Vec<Vec<i64>>) -> PyResult<Self> {
        let mode = match mode {
            "outdeg" => ForbiddenMode::OutDegree,
            "imbalance" => ForbiddenMode::Imbalance,
            other => {
                return Err(PyValueError::new_err(format!(
                    "mode must be 'outdeg' or 'imbalance', got {other:?}"
                )))
            }
        };
        let (inner, dropped) = ForbiddenSets::new(&graph.inner, mode, sets).map_err(err)?;
        Ok(PyForbiddenSets { inner, dropped })
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner.mode() {
            ForbiddenMode::OutDegree => "outdeg",
            ForbiddenMode::Imbalance => "imbalance",
        }
    }

    #[getter]
    fn dropped(&self) -> usize {
        self.dropped
    }

    fn sets(&self) -> Vec<Vec<i64>> {
        (0..self.inner.len())
            .map(|v| self.inner.set(v).iter().copied().collect())
            .collect()
    }

    fn size(&self, v: usize) -> usize {
        self.inner.size(v)
    }

    fn to_imbalance(&self, graph: &Graph) -> PyResult<Self> {
        Ok(PyForbiddenSets {
            inner: self.inner.to_imbalance(&graph.inner).map_err(err)?,
            dropped: 0,
        })
    }

    fn to_out_degree(&self, graph: &Graph) -> PyResult<Self> {
        Ok(PyForbiddenSets {
            inner: self.inner.to_out_degree(&graph.inner).map_err(err)?,
            dropped: 0,
        })
    }
}

fn certificate_dict(py: Python<'_>, cert: &constructors::HCertificate) -> PyResult<Py<PyAny>> {
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("ordering", cert.ordering.seq().to_vec())?;
    dict.set_item("h_edges", cert.h.edge_indices())?;
    dict.set_item("slack", cert.slack.clone())?;
    dict.set_item("valid", cert.valid)?;
    Ok(dict.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (graph, ordering, h_edges=None))]
fn left_right_degrees(
    graph: &Graph,
    ordering: Vec<usize>,
    h_edges: Option<Vec<usize>>,
) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let ord = ordering_from_py(ordering)?;
    let sub = h_edges
        .map(|e| core::Subgraph::from_edge_indices(Arc::clone(&graph.inner), &e))
        .transpose()
        .map_err(err)?;
    core::left_right_degrees(&graph.inner, &ord, sub.as_ref()).map_err(err)
}

#[pyfunction]
fn certify(
    py: Python<'_>,
    graph: &Graph,
    ordering: Vec<usize>,
    h_edges: Vec<usize>,
    f: &PyForbiddenSets,
) -> PyResult<Py<PyAny>> {
    let ord = ordering_from_py(ordering)?;
    let h = core::Subgraph::from_edge_indices(Arc::clone(&graph.inner), &h_edges).map_err(err)?;
    let cert = constructors::certify_h_condition(&graph.inner, &ord, &h, &f.inner).map_err(err)?;
    certificate_dict(py, &cert)
}

#[pyfunction]
#[pyo3(signature = (graph, ordering=None))]
fn build_h_third(
    graph: &Graph,
    ordering: Option<Vec<usize>>,
) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let ord = match ordering {
        Some(seq) => ordering_from_py(seq)?,
        None => VertexOrdering::identity(graph.inner.n()),
    };
    let (ord, h) = constructors::build_h_third(&graph.inner, &ord).map_err(err)?;
    Ok((ord.seq().to_vec(), h.edge_indices()))
}

#[pyfunction]
fn minimize_forward_edges(graph: &Graph, d: &Orientation) -> PyResult<Vec<usize>> {
    Ok(constructors::minimize_forward_edges(&graph.inner, &d.inner)
        .map_err(err)?
        .seq()
        .to_vec())
}

#[pyfunction]
fn build_h_two_thirds(graph: &Graph, d: &Orientation) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let (ord, h) = constructors::build_h_two_thirds(&graph.inner, &d.inner).map_err(err)?;
    Ok((ord.seq().to_vec(), h.edge_indices()))
}

#[pyfunction]
#[pyo3(signature = (graph, gamma, seed=0, max_attempts=200))]
fn build_h_random(
    py: Python<'_>,
    graph: &Graph,
    gamma: &Bound<'_, PyAny>,
    seed: u64,
    max_attempts: u32,
) -> PyResult<Py<PyAny>> {
    let gamma = rat_from_py(gamma)?;
    let outcome =
        constructors::build_h_random(&graph.inner, &gamma, seed, max_attempts).map_err(err)?;
    let dict = pyo3::types::PyDict::new(py);
    match outcome {
        RandomOutcome::Accepted(s) => {
            dict.set_item("accepted", true)?;
            dict.set_item("attempt", s.attempt)?;
            dict.set_item("ordering", s.ordering.seq().to_vec())?;
            dict.set_item("h_edges", s.h.edge_indices())?;
            dict.set_item("weight", s.weight)?;
        }
        RandomOutcome::Exhausted(f) => {
            dict.set_item("accepted", false)?;
            dict.set_item("attempts", f.attempts)?;
            dict.set_item("best_attempt", f.best_attempt)?;
            let violations: Vec<(usize, usize, i64, String)> = f
                .violations
                .iter()
                .map(|v| (v.vertex, v.degree, v.weight, v.threshold.clone()))
                .collect();
            dict.set_item("violations", violations)?;
        }
    }
    Ok(dict.into_any().unbind())
}

#[pyfunction]
fn alpha_gamma_floor(degree: usize, gamma: &Bound<'_, PyAny>) -> PyResult<i64> {
    Ok(constructors::alpha_gamma_floor(
        degree,
        &rat_from_py(gamma)?,
    ))
}

#[pyfunction]
fn balanced_orientation(graph: &Graph) -> Orientation {
    Orientation {
        inner: core::balanced_orientation(&graph.inner),
    }
}

#[pyfunction]
fn round_fractional(
    graph: &Graph,
    entries: Vec<(usize, usize, Bound<'_, PyAny>)>,
    y: Vec<Bound<'_, PyAny>>,
) -> PyResult<Vec<bool>> {
    let entries: Vec<(usize, usize, Rat)> = entries
        .into_iter()
        .map(|(v, e, val)| Ok((v, e, rat_from_py(&val)?)))
        .collect::<PyResult<_>>()?;
    let m = rounding::EdgeVertexMatrix::from_entries(&graph.inner, &entries).map_err(err)?;
    let y: Vec<Rat> = y.iter().map(rat_from_py).collect::<PyResult<_>>()?;
    let yvec = rounding::FractionalEdgeVector::new(y).map_err(err)?;
    rounding::round(&m, &yvec).map_err(err)
}

#[pyfunction]
fn permanent(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<String> {
    let m = matrix_from_py(rows)?;
    Ok(format_rat(&m.permanent().map_err(err)?))
}

#[pyfunction]
fn coeff_via_permanent(
    rows: Vec<Vec<Bound<'_, PyAny>>>,
    alpha: Vec<usize>,
    beta: Vec<usize>,
) -> PyResult<(String, String, String)> {
    let m = matrix_from_py(rows)?;
    let dual = algebra::coeff_via_permanent(&m, &alpha, &beta).map_err(err)?;
    Ok((
        format_rat(&dual.permanent),
        format_rat(&dual.coeff_y),
        format_rat(&dual.coeff_x),
    ))
}

#[pyfunction]
fn naive_coeff_y(
    rows: Vec<Vec<Bound<'_, PyAny>>>,
    alpha: Vec<usize>,
    beta: Vec<usize>,
) -> PyResult<String> {
    let m = matrix_from_py(rows)?;
    Ok(format_rat(
        &algebra::naive_coeff_y(&m, &alpha, &beta).map_err(err)?,
    ))
}

#[pyfunction]
fn naive_coeff_x(
    rows: Vec<Vec<Bound<'_, PyAny>>>,
    alpha: Vec<usize>,
    beta: Vec<usize>,
) -> PyResult<String> {
    let m = matrix_from_py(rows)?;
    Ok(format_rat(
        &algebra::naive_coeff_x(&m, &alpha, &beta).map_err(err)?,
    ))
}

#[pyfunction]
fn eulerian_counts(d: &Orientation) -> PyResult<(u64, u64)> {
    algebra::eulerian_counts(&d.inner).map_err(err)
}

#[pyfunction]
fn eulerian_diff(d: &Orientation) -> PyResult<i64> {
    algebra::eulerian_diff(&d.inner).map_err(err)
}

#[pyfunction]
fn eulerian_diff_arcs(n: usize, arcs: Vec<(usize, usize)>) -> PyResult<i64> {
    algebra::eulerian_diff_arcs(n, &arcs).map_err(err)
}

#[pyfunction]
fn at_condition_check(
    graph: &Graph,
    h_edges: Vec<usize>,
    d: &Orientation,
    f: &PyForbiddenSets,
) -> PyResult<bool> {
    let h = core::Subgraph::from_edge_indices(Arc::clone(&graph.inner), &h_edges).map_err(err)?;
    algebra::at_condition_check(&graph.inner, &h, &d.inner, &f.inner).map_err(err)
}

#[pyfunction]
fn at_number(graph: &Graph) -> PyResult<usize> {
    algebra::at_number(&graph.inner).map_err(err)
}

#[pyfunction]
fn zp_certificate(graph: &Graph, p: u32, arcs: Vec<(usize, usize)>, u: usize) -> PyResult<bool> {
    algebra::zp_certificate(&graph.inner, p, &arcs, u).map_err(err)
}

#[pyfunction]
fn inclusion_matrix(ground: usize, d: usize, b: usize) -> PyResult<Vec<Vec<u8>>> {
    let m = algebra::inclusion_matrix(ground, d, b).map_err(err)?;
    Ok((0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    if m.get(i, j) == &Rat::from_integer(1.into()) {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect())
}

#[pyfunction]
fn rational_rank(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<usize> {
    Ok(matrix_from_py(rows)?.rank())
}

#[pyfunction]
fn find_orientation(graph: &Graph, f: &PyForbiddenSets) -> PyResult<Option<Orientation>> {
    match oracle::find_orientation(&graph.inner, &f.inner).map_err(err)? {
        oracle::SolveOutcome::Sat(d) => Ok(Some(Orientation { inner: d })),
        oracle::SolveOutcome::Unsat => Ok(None),
    }
}

#[pyfunction]
fn find_b_flow(graph: &Graph, p: u32, b: Vec<i64>) -> PyResult<Option<Vec<u32>>> {
    oracle::find_b_flow(&graph.inner, p, &b).map_err(err)
}

#[pyfunction]
fn frank_gyarfas_check(graph: &Graph, a: Vec<i64>, b: Vec<i64>) -> PyResult<bool> {
    oracle::frank_gyarfas_check(&graph.inner, &a, &b).map_err(err)
}

#[pyfunction]
fn gen_complete(n: usize) -> PyResult<Graph> {
    Ok(Graph {
        inner: Arc::new(gen::complete(n).map_err(err)?),
    })
}

#[pyfunction]
fn gen_complete_minus_matching(n: usize) -> PyResult<Graph> {
    Ok(Graph {
        inner: Arc::new(gen::complete_minus_matching(n).map_err(err)?),
    })
}

#[pyfunction]
fn gen_cycle(n: usize) -> PyResult<Graph> {
    Ok(Graph {
        inner: Arc::new(gen::cycle(n).map_err(err)?),
    })
}

#[pyfunction]
#[pyo3(signature = (n, p, seed=0))]
fn gen_gnp(n: usize, p: f64, seed: u64) -> PyResult<Graph> {
    Ok(Graph {
        inner: Arc::new(gen::gnp(n, p, seed).map_err(err)?),
    })
}

#[pyfunction]
#[pyo3(signature = (n1, n2, p, seed=0))]
fn gen_bipartite(n1: usize, n2: usize, p: f64, seed: u64) -> PyResult<Graph> {
    Ok(Graph {
        inner: Arc::new(gen::bipartite(n1, n2, p, seed).map_err(err)?),
    })
}

#[pymodule]
fn orientavoid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Orientation>()?;
    m.add_class::<PyForbiddenSets>()?;
    m.add_function(wrap_pyfunction!(left_right_degrees, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(build_h_third, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_forward_edges, m)?)?;
    m.add_function(wrap_pyfunction!(build_h_two_thirds, m)?)?;
    m.add_function(wrap_pyfunction!(build_h_random, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_gamma_floor, m)?)?;
    m.add_function(wrap_pyfunction!(balanced_orientation, m)?)?;
    m.add_function(wrap_pyfunction!(round_fractional, m)?)?;
    m.add_function(wrap_pyfunction!(permanent, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_via_permanent, m)?)?;
    m.add_function(wrap_pyfunction!(naive_coeff_y, m)?)?;
    m.add_function(wrap_pyfunction!(naive_coeff_x, m)?)?;
    m.add_function(wrap_pyfunction!(eulerian_counts, m)?)?;
    m.add_function(wrap_pyfunction!(eulerian_diff, m)?)?;
    m.add_function(wrap_pyfunction!(eulerian_diff_arcs, m)?)?;
    m.add_function(wrap_pyfunction!(at_condition_check, m)?)?;
    m.add_function(wrap_pyfunction!(at_number, m)?)?;
    m.add_function(wrap_pyfunction!(zp_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(rational_rank, m)?)?;
    m.add_function(wrap_pyfunction!(find_orientation, m)?)?;
    m.add_function(wrap_pyfunction!(find_b_flow, m)?)?;
    m.add_function(wrap_pyfunction!(frank_gyarfas_check, m)?)?;
    m.add_function(wrap_pyfunction!(gen_complete, m)?)?;
    m.add_function(wrap_pyfunction!(gen_complete_minus_matching, m)?)?;
    m.add_function(wrap_pyfunction!(gen_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(gen_gnp, m)?)?;
    m.add_function(wrap_pyfunction!(gen_bipartite, m)?)?;
    Ok(())
}
