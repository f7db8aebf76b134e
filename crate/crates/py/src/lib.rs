//! Python bindings for `episource_core`.
//!
//! Exact likelihoods and scores come back as `fractions.Fraction`; structured
//! results (snapshots, estimator output, bench summaries) as plain dicts.

use episource_core::bench::{self, ExperimentConfig};
use episource_core::centrality::{self as cent, CentralityScores};
use episource_core::estimators::{self, parse_estimators, TieMode};
use episource_core::graph::{self as core_graph, io, GeneratorSpec};
use episource_core::likelihood::{self, HostedSubgraph, LikelihoodProfile, Oracle, DEFAULT_ENUMERATION_CAP};
use episource_core::spread::{NodeRates, Simulator};
use episource_core::{Error, ErrorClass};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

pyo3::create_exception!(episource, TopologyError, PyValueError, "Input graph has the wrong shape.");
pyo3::create_exception!(episource, CapExceededError, PyRuntimeError, "Enumeration cap exceeded.");

fn to_py_err(e: Error) -> PyErr {
    match e.class() {
        ErrorClass::Usage => PyValueError::new_err(e.to_string()),
        ErrorClass::Topology => TopologyError::new_err(e.to_string()),
        ErrorClass::ResourceCap => CapExceededError::new_err(e.to_string()),
        ErrorClass::Io => PyIOError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for episource_core::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let list = PyList::empty(py);
            for x in a {
                list.append(json_to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn fraction<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((text,))
}

/// Undirected simple graph with optional string labels.
#[pyclass(name = "Graph", module = "episource", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: core_graph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, labels=None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let mut g = core_graph::Graph::from_edges(n, &edges).py_err()?;
        if let Some(l) = labels {
            g = g.with_labels(l).py_err()?;
        }
        Ok(PyGraph { inner: g })
    }

    /// Parse the edge-list text format.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: io::parse_edge_list(text).py_err()? })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: io::read_edge_list_file(path).py_err()? })
    }

    /// Synthetic graph from a spec such as `grid:10x10`.
    #[staticmethod]
    #[pyo3(signature = (spec, seed=0))]
    fn generate(spec: &str, seed: u64) -> PyResult<Self> {
        let spec: GeneratorSpec = spec.parse().py_err()?;
        Ok(PyGraph { inner: core_graph::generate(&spec, seed).py_err()? })
    }

    fn to_edge_list(&self) -> String {
        io::edge_list_string(&self.inner)
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.check(v)?;
        Ok(self.inner.degree(v))
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.check(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.order()).map(|v| self.inner.label(v)).collect()
    }

    fn index(&self, label: &str) -> PyResult<usize> {
        self.inner.find_label(label).ok_or_else(|| PyValueError::new_err(format!("no vertex labelled {label:?}")))
    }

    fn is_tree(&self) -> bool {
        self.inner.is_tree()
    }

    fn is_unicyclic(&self) -> bool {
        self.inner.is_unicyclic()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn components(&self) -> Vec<Vec<usize>> {
        self.inner.components()
    }

    fn induced_subgraph(&self, vertices: Vec<usize>) -> PyResult<Self> {
        Ok(PyGraph { inner: self.inner.induced_subgraph(&vertices).py_err()? })
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    fn distances(&self, source: usize) -> PyResult<Vec<Option<usize>>> {
        core_graph::distances(&self.inner, source).py_err()
    }

    /// Size of the smallest cycle through each vertex: 1 for leaves and
    /// isolated vertices, `None` for vertices on no cycle.
    fn minimum_cycle_sizes(&self) -> Vec<Option<usize>> {
        core_graph::minimum_cycle_sizes(&self.inner)
            .sizes
            .iter()
            .map(|c| match c {
                core_graph::CycleSize::Finite(k) => Some(*k),
                core_graph::CycleSize::Acyclic => None,
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Graph(order={}, size={})", self.inner.order(), self.inner.size())
    }
}

impl PyGraph {
    fn check(&self, v: usize) -> PyResult<()> {
        if v < self.inner.order() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("vertex {v} out of range for graph of order {}", self.inner.order())))
        }
    }
}

fn profile_dict<'py>(py: Python<'py>, p: &LikelihoodProfile, g: &core_graph::Graph) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for x in &p.vertices {
        d.set_item(g.label(x.vertex), fraction(py, &x.likelihood.to_string())?)?;
    }
    Ok(d)
}

fn scores_dict<'py>(py: Python<'py>, s: &CentralityScores, g: &core_graph::Graph) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for v in 0..s.len() {
        d.set_item(g.label(v), fraction(py, &s.scores[v].to_string())?)?;
    }
    Ok(d)
}

/// Run the SI process from `source` until `n` vertices are infected.
#[pyfunction]
#[pyo3(signature = (graph, source, n, seed, cap_k=0))]
fn simulate<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    source: usize,
    n: usize,
    seed: u64,
    cap_k: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let snap = py
        .detach(|| Simulator::new(&graph.inner, NodeRates::unit())?.run(source, n, cap_k, seed))
        .py_err()?;
    let v = snap.to_json(&graph.inner);
    json_to_py(py, &v)
}

/// Exact likelihood of every vertex of `graph` as the source, by enumeration.
/// `host_degree` is one underlying degree per vertex, or a single int.
#[pyfunction]
#[pyo3(signature = (graph, host_degree, cap=DEFAULT_ENUMERATION_CAP))]
fn oracle_likelihoods<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    host_degree: Bound<'py, PyAny>,
    cap: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let degrees: Vec<usize> = match host_degree.extract::<usize>() {
        Ok(d) => vec![d; graph.inner.order()],
        Err(_) => host_degree.extract()?,
    };
    let hs = HostedSubgraph::with_degrees(graph.inner.clone(), degrees).py_err()?;
    let p = py.detach(|| Oracle::new(&hs).cap(cap).profile()).py_err()?;
    profile_dict(py, &p, &graph.inner)
}

/// Closed-form likelihoods on a path whose last vertex is a leaf of the
/// `d`-regular underlying graph. Keys are `v1..vn`.
#[pyfunction]
fn line_likelihood<'py>(py: Python<'py>, d: usize, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let hs = likelihood::line_instance(d, n).py_err()?;
    let p = likelihood::line_likelihood(d, n).py_err()?;
    profile_dict(py, &p, hs.graph())
}

/// Closed-form likelihoods on a path of `2t` vertices with `k` leaves on its end.
#[pyfunction]
fn broom_likelihood<'py>(py: Python<'py>, d: usize, t: usize, k: usize) -> PyResult<Bound<'py, PyDict>> {
    let hs = likelihood::broom_instance(d, t, k).py_err()?;
    let p = likelihood::broom_likelihood(d, t, k).py_err()?;
    profile_dict(py, &p, hs.graph())
}

/// Likelihoods on a unicyclic infection graph inside a `d`-regular graph.
#[pyfunction]
fn unicyclic_likelihood<'py>(py: Python<'py>, graph: &PyGraph, d: usize) -> PyResult<Bound<'py, PyDict>> {
    let hs = HostedSubgraph::with_uniform_degree(graph.inner.clone(), d).py_err()?;
    let p = likelihood::unicyclic_likelihood(&hs).py_err()?;
    profile_dict(py, &p, &graph.inner)
}

/// Centrality scores by label. `kind` is one of epidemic, bfs-rc, distance,
/// jordan, sdc.
#[pyfunction]
fn centrality<'py>(py: Python<'py>, graph: &PyGraph, kind: &str) -> PyResult<Bound<'py, PyDict>> {
    let g = &graph.inner;
    let s = py
        .detach(|| match kind {
            "epidemic" if g.is_unicyclic() => cent::epidemic_centrality_unicyclic(g),
            "epidemic" => cent::epidemic_centrality_tree(g),
            "bfs-rc" => cent::bfs_rumor_centrality(g),
            "distance" => cent::distance_centrality(g),
            "jordan" => cent::jordan_centrality(g),
            "sdc" => {
                let w = cent::sdc_weights(&core_graph::minimum_cycle_sizes(g));
                cent::statistical_distance_centrality(g, &w)
            }
            other => Err(Error::InvalidParameter(format!("unknown centrality {other:?}"))),
        })
        .py_err()?;
    scores_dict(py, &s, g)
}

/// Run estimators (comma-separated names or `all`) and return one dict each.
#[pyfunction]
#[pyo3(signature = (graph, est="sct", irregular=None, k=None, spill=false))]
fn estimate<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    est: &str,
    irregular: Option<Vec<String>>,
    k: Option<usize>,
    spill: bool,
) -> PyResult<Bound<'py, PyList>> {
    let g = &graph.inner;
    let kinds = parse_estimators(est).py_err()?;
    let irr: Vec<usize> = match irregular {
        Some(labels) => labels.iter().map(|l| graph.index(l)).collect::<PyResult<_>>()?,
        None => (0..g.order()).filter(|&v| g.degree(v) == 1).collect(),
    };
    let ties = if spill { TieMode::Spill } else { TieMode::Truncate };
    let results = py.detach(|| estimators::estimate_many(&kinds, g, &irr, k, ties));
    let out = PyList::empty(py);
    for (kind, r) in results {
        match r.py_err()? {
            Some(r) => out.append(json_to_py(py, &r.to_json(g))?)?,
            None => out.append(json_to_py(py, &serde_json::json!({ "estimator": kind.as_str(), "skipped": true }))?)?,
        }
    }
    Ok(out)
}

/// Smallest hop distance from `true_source` to any candidate.
#[pyfunction]
fn hop_error(graph: &PyGraph, candidates: Vec<usize>, true_source: usize) -> PyResult<usize> {
    estimators::hop_error(&graph.inner, &candidates, true_source).py_err()
}

/// Run a Monte-Carlo experiment from `key = value` config text. Returns
/// `(csv, summary)`.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config: &str) -> PyResult<(String, Bound<'py, PyAny>)> {
    let cfg = ExperimentConfig::parse(config).py_err()?;
    let run = py.detach(|| bench::run_experiment(&cfg)).py_err()?;
    Ok((bench::records_csv(&run.records), json_to_py(py, &run.summary.to_json())?))
}

#[pymodule]
mod episource {
    #[pymodule_export]
    use super::{
        broom_likelihood, centrality, estimate, hop_error, line_likelihood, oracle_likelihoods, run_experiment,
        simulate, unicyclic_likelihood, CapExceededError, PyGraph, TopologyError,
    };
}
