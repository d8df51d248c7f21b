//! Python bindings: graph generation, min-cut capacity, bounds and sweeps.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qnetcap_core::asymptotics::{self, BoundResult, QuadratureSpec, DEFAULT_EPSILON_KM};
use qnetcap_core::ensemble::{self, write_records_csv, write_summary_csv};
use qnetcap_core::graphstats::{clustering, components, degree_histogram};
use qnetcap_core::netgen::{self, half_width_for_alpha, DEFAULT_ALPHA_L_KM};
use qnetcap_core::{
    CutResult, Error, ExperimentConfig, Family, LossParams, ModelParams, SweepOutput,
    WeightedGraph, DEFAULT_GAMMA,
};

create_exception!(qnetcap, QnetcapError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParam { .. } | Error::NonPositiveDistance(_) | Error::SameEndpoints(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::UnknownNode { .. } => PyIndexError::new_err(e.to_string()),
        other => QnetcapError::new_err(other.to_string()),
    }
}

fn loss(gamma: f64) -> PyResult<LossParams> {
    LossParams::new(gamma).map_err(to_py)
}

/// A spatial fiber network with pure-loss link capacities.
#[pyclass(module = "qnetcap", frozen)]
struct Graph {
    inner: WeightedGraph,
}

/// Result of a min-cut query.
#[pyclass(module = "qnetcap", frozen, get_all)]
struct Cut {
    value: f64,
    flow_value: f64,
    cut_edges: Vec<(usize, usize)>,
    end_ratio: f64,
    connected: bool,
}

impl From<CutResult> for Cut {
    fn from(c: CutResult) -> Self {
        Self {
            connected: c.connected(),
            value: c.value,
            flow_value: c.flow_value,
            end_ratio: c.end_incident_ratio,
            cut_edges: c.cut_edges,
        }
    }
}

#[pymethods]
impl Cut {
    fn __repr__(&self) -> String {
        format!(
            "Cut(value={}, edges={}, end_ratio={})",
            self.value,
            self.cut_edges.len(),
            self.end_ratio
        )
    }
}

/// Value of a constant or bound with its error estimate.
#[pyclass(name = "Bound", module = "qnetcap", frozen, get_all)]
struct BoundValue {
    value: f64,
    error: f64,
    method: String,
    samples: Option<usize>,
}

impl From<BoundResult> for BoundValue {
    fn from(b: BoundResult) -> Self {
        Self {
            value: b.value,
            error: b.error,
            method: match b.method {
                asymptotics::Method::Quadrature => "quadrature".to_string(),
                asymptotics::Method::MonteCarlo => "monte_carlo".to_string(),
            },
            samples: b.samples,
        }
    }
}

#[pymethods]
impl BoundValue {
    fn __repr__(&self) -> String {
        format!("Bound(value={}, error={}, method='{}')", self.value, self.error, self.method)
    }
}

#[pymethods]
impl Graph {
    /// Parses a JSON graph document.
    #[staticmethod]
    #[pyo3(signature = (text, gamma = DEFAULT_GAMMA))]
    fn from_json(text: &str, gamma: f64) -> PyResult<Self> {
        let graph = netgen::from_json(text).map_err(to_py)?;
        Ok(Self {
            inner: WeightedGraph::new(graph, loss(gamma)?),
        })
    }

    fn to_json(&self) -> String {
        netgen::to_json(self.inner.graph())
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.graph().edge_count()
    }

    #[getter]
    fn half_width(&self) -> f64 {
        self.inner.graph().half_width()
    }

    #[getter]
    fn density(&self) -> f64 {
        self.inner.graph().density()
    }

    #[getter]
    fn coords(&self) -> Vec<(f64, f64)> {
        self.inner.graph().coords().iter().map(|c| (c.x, c.y)).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.graph().edges().to_vec()
    }

    #[getter]
    fn edge_capacities(&self) -> Vec<f64> {
        self.inner.capacities().to_vec()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.graph().degrees()
    }

    fn node_capacity(&self, v: usize) -> PyResult<f64> {
        self.inner.node_capacity(v).map_err(to_py)
    }

    /// Min-cut capacity between `s` and `t`, in ebits per channel use.
    fn capacity(&self, py: Python<'_>, s: usize, t: usize) -> PyResult<Cut> {
        py.detach(|| self.inner.end_to_end_capacity(s, t))
            .map(Cut::from)
            .map_err(to_py)
    }

    /// Exact mean capacity over all node pairs, from `N - 1` max flows.
    fn mean_pair_capacity(&self, py: Python<'_>) -> PyResult<f64> {
        py.detach(|| self.inner.flow_tree())
            .map(|tree| tree.mean_pair_capacity())
            .map_err(to_py)
    }

    /// Shortest fiber path length in km, or None when disconnected.
    fn graph_distance(&self, s: usize, t: usize) -> PyResult<Option<f64>> {
        self.inner.graph_distance(s, t).map_err(to_py)
    }

    /// Degree moments, giant-component fraction and mean clustering.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let g = self.inner.graph();
        let hist = degree_histogram(g);
        let d = PyDict::new(py);
        d.set_item("mean_degree", hist.mean)?;
        d.set_item("degree_variance", hist.variance)?;
        d.set_item("giant_fraction", components(g).giant_fraction)?;
        d.set_item("mean_clustering", clustering(g).mean)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(nodes={}, edges={}, R_km={})",
            self.node_count(),
            self.edge_count(),
            self.half_width()
        )
    }
}

/// Samples a network. Give the region either as `r_km` or as `alpha`.
#[pyfunction]
#[pyo3(signature = (model, n, r_km = None, alpha = None, seed = 0, m = 2, p = None,
                    alpha_l_km = DEFAULT_ALPHA_L_KM, gamma = DEFAULT_GAMMA))]
#[allow(clippy::too_many_arguments)]
fn generate(
    py: Python<'_>,
    model: &str,
    n: usize,
    r_km: Option<f64>,
    alpha: Option<f64>,
    seed: u64,
    m: usize,
    p: Option<f64>,
    alpha_l_km: f64,
    gamma: f64,
) -> PyResult<Graph> {
    let family: Family = model.parse().map_err(to_py)?;
    let r_km = match (r_km, alpha) {
        (Some(r), None) => r,
        (None, Some(a)) => half_width_for_alpha(a, alpha_l_km),
        _ => return Err(PyValueError::new_err("give exactly one of r_km and alpha")),
    };
    let params = ModelParams {
        family,
        n,
        r_km,
        alpha,
        alpha_l_km,
        m,
        p,
        seed,
    };
    let loss = loss(gamma)?;
    let graph = py.detach(|| netgen::generate(&params)).map_err(to_py)?;
    Ok(Graph {
        inner: WeightedGraph::new(graph, loss),
    })
}

#[pyfunction]
#[pyo3(signature = (distance_km, gamma = DEFAULT_GAMMA))]
fn edge_capacity(distance_km: f64, gamma: f64) -> PyResult<f64> {
    qnetcap_core::edge_capacity(distance_km, &loss(gamma)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (gamma = DEFAULT_GAMMA, alpha_l_km = DEFAULT_ALPHA_L_KM, rel_tol = 1e-8))]
fn zeta(gamma: f64, alpha_l_km: f64, rel_tol: f64) -> PyResult<BoundValue> {
    let spec = QuadratureSpec::waxman_default().with_tolerance(rel_tol);
    asymptotics::zeta_waxman(alpha_l_km, &loss(gamma)?, &spec)
        .map(BoundValue::from)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (gamma = DEFAULT_GAMMA, rel_tol = 1e-8))]
fn zeta_er(gamma: f64, rel_tol: f64) -> PyResult<BoundValue> {
    let spec = QuadratureSpec::er_default().with_tolerance(rel_tol);
    asymptotics::zeta_er(&loss(gamma)?, &spec).map(BoundValue::from).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, r_km, seed = 0, samples = 400_000, alpha_l_km = DEFAULT_ALPHA_L_KM, gamma = DEFAULT_GAMMA))]
fn node_bound_waxman(n: usize, r_km: f64, seed: u64, samples: usize, alpha_l_km: f64, gamma: f64) -> PyResult<BoundValue> {
    asymptotics::node_bound_waxman_exact(n, r_km, alpha_l_km, &loss(gamma)?, samples, seed)
        .map(BoundValue::from)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (m, r_km, seed = 0, samples = 400_000, epsilon_km = DEFAULT_EPSILON_KM, gamma = DEFAULT_GAMMA))]
fn node_bound_scale_free(m: usize, r_km: f64, seed: u64, samples: usize, epsilon_km: f64, gamma: f64) -> PyResult<BoundValue> {
    asymptotics::node_bound_scale_free(m, r_km, &loss(gamma)?, samples, epsilon_km, seed)
        .map(BoundValue::from)
        .map_err(to_py)
}

/// Density where a `(rho, mean capacity)` curve crosses `level`.
#[pyfunction]
#[pyo3(signature = (points, level = 1.0))]
fn find_crossing(points: Vec<(f64, f64)>, level: f64) -> PyResult<f64> {
    ensemble::find_crossing(&points, level).map_err(to_py)
}

/// Output of `run_sweep`.
#[pyclass(module = "qnetcap", frozen)]
struct Sweep {
    inner: SweepOutput,
}

#[pymethods]
impl Sweep {
    #[getter]
    fn master_seed(&self) -> u64 {
        self.inner.master_seed
    }

    #[getter]
    fn record_count(&self) -> usize {
        self.inner.records.len()
    }

    /// One dict per sweep point.
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .summary
            .iter()
            .map(|s| {
                let d = PyDict::new(py);
                d.set_item("point_index", s.point_index)?;
                d.set_item("model", s.family.name())?;
                d.set_item("N", s.n)?;
                d.set_item("R_km", s.r_km)?;
                d.set_item("rho", s.rho)?;
                d.set_item("p", s.p)?;
                d.set_item("mean_C", s.mean_capacity)?;
                d.set_item("median_C", s.median_capacity)?;
                d.set_item("mean_ratio", s.mean_ratio)?;
                d.set_item("connected_fraction", s.connected_fraction)?;
                d.set_item("bound_exact", s.bound_exact)?;
                d.set_item("bound_asymptotic", s.bound_asymptotic)?;
                d.set_item("bound_violations", s.bound_violations)?;
                Ok(d)
            })
            .collect()
    }

    fn records_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &self.inner.records).map_err(to_py)?;
        String::from_utf8(buf).map_err(|e| QnetcapError::new_err(e.to_string()))
    }

    fn summary_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &self.inner.summary).map_err(to_py)?;
        String::from_utf8(buf).map_err(|e| QnetcapError::new_err(e.to_string()))
    }
}

/// Runs an ensemble sweep described by a JSON config string.
#[pyfunction]
#[pyo3(signature = (config_json, seed = None, workers = None))]
fn run_sweep(py: Python<'_>, config_json: &str, seed: Option<u64>, workers: Option<usize>) -> PyResult<Sweep> {
    let mut cfg = ExperimentConfig::from_json(config_json).map_err(to_py)?;
    if seed.is_some() {
        cfg.master_seed = seed;
    }
    let out = py
        .detach(|| match workers {
            Some(w) => qnetcap_core::run_sweep_with_workers(&cfg, w),
            None => qnetcap_core::run_sweep(&cfg),
        })
        .map_err(to_py)?;
    Ok(Sweep { inner: out })
}

#[pymodule]
fn qnetcap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QnetcapError", m.py().get_type::<QnetcapError>())?;
    m.add_class::<Graph>()?;
    m.add_class::<Cut>()?;
    m.add_class::<BoundValue>()?;
    m.add_class::<Sweep>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(edge_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_er, m)?)?;
    m.add_function(wrap_pyfunction!(node_bound_waxman, m)?)?;
    m.add_function(wrap_pyfunction!(node_bound_scale_free, m)?)?;
    m.add_function(wrap_pyfunction!(find_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
