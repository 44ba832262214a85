//! Python bindings, importable as `isingtsp`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use isingtsp::ising::{AnnealSchedule, StochasticModel};
use isingtsp::{BitWidth, EdgeWeightType, Error, Point};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Parse(_)
        | Error::UnsupportedBitWidth(_)
        | Error::TooFewNodes { .. }
        | Error::TooManyNodes { .. }
        | Error::NonFiniteCoordinate(_)
        | Error::SizeMismatch { .. }
        | Error::NotAPermutation(_)
        | Error::ClusterSize { .. }
        | Error::InvalidEndpoints(_)
        | Error::Config(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn convention(name: &str) -> PyResult<EdgeWeightType> {
    name.parse()
        .map_err(|e: isingtsp::ParseErrorKind| PyValueError::new_err(e.to_string()))
}

fn bit_width(bits: u32) -> PyResult<BitWidth> {
    BitWidth::new(bits).map_err(py_err)
}

/// A Euclidean TSP instance.
#[pyclass(name = "Instance", module = "isingtsp", frozen)]
struct PyInstance {
    inner: isingtsp::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (coords, edge_weight_type = "EUC_2D", name = "unnamed"))]
    fn new(coords: Vec<(f64, f64)>, edge_weight_type: &str, name: &str) -> PyResult<Self> {
        let coords: Vec<Point> = coords.into_iter().map(Point::from).collect();
        Ok(PyInstance {
            inner: isingtsp::Instance::new(name, convention(edge_weight_type)?, coords),
        })
    }

    /// Parses TSPLIB text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = isingtsp::parse_instance(text).map_err(|e| py_err(e.into()))?;
        Ok(PyInstance { inner })
    }

    /// Reads a TSPLIB file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text)
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn edge_weight_type(&self) -> &'static str {
        self.inner.edge_weight_type.as_str()
    }

    #[getter]
    fn coords(&self) -> Vec<(f64, f64)> {
        self.inner.coords.iter().map(|p| (p.x, p.y)).collect()
    }

    fn distance_matrix(&self) -> PyResult<Vec<Vec<u32>>> {
        let dm = isingtsp::build_distance_matrix(&self.inner.coords, self.inner.edge_weight_type).map_err(py_err)?;
        Ok((0..dm.n()).map(|i| dm.row(i).to_vec()).collect())
    }

    /// Closed-tour length of a permutation of `0..dimension`.
    fn tour_length(&self, tour: Vec<usize>) -> PyResult<u64> {
        isingtsp::distance::points_tour_length(&self.inner.coords, self.inner.edge_weight_type, &tour, true)
            .map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.inner.dimension()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(name={:?}, dimension={}, edge_weight_type={:?})",
            self.inner.name,
            self.inner.dimension(),
            self.inner.edge_weight_type.as_str()
        )
    }
}

/// Result of [`solve`].
#[pyclass(name = "Solution", module = "isingtsp", frozen, get_all)]
struct PySolution {
    tour: Vec<usize>,
    tour_length: u64,
    levels: usize,
    order_updates: u64,
    macro_latency_ns: f64,
    macro_energy_pj: f64,
    annealing_s: f64,
}

#[pymethods]
impl PySolution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(tour_length={}, levels={}, macro_latency_ns={}, macro_energy_pj={})",
            self.tour_length, self.levels, self.macro_latency_ns, self.macro_energy_pj
        )
    }
}

/// Hierarchical solve on simulated macros.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (instance, max_cluster_size = 12, bits = 4, seed = 0, threads = 0, nonideal_eps = 0.0, chip_macros = 0))]
fn solve(
    py: Python<'_>,
    instance: &PyInstance,
    max_cluster_size: usize,
    bits: u32,
    seed: u64,
    threads: usize,
    nonideal_eps: f64,
    chip_macros: usize,
) -> PyResult<PySolution> {
    let cfg = isingtsp::SolveConfig {
        max_cluster_size,
        bits: bit_width(bits)?,
        seed,
        max_parallel: threads,
        nonideal_eps,
        ..isingtsp::SolveConfig::default()
    };
    let inst = &instance.inner;
    let sol = py.detach(|| isingtsp::solve_hierarchical(inst, &cfg)).map_err(py_err)?;
    let cost = isingtsp::estimate(&sol.trace, cfg.bits, Some(chip_macros));
    Ok(PySolution {
        tour_length: sol.trace.tour_length,
        levels: sol.trace.levels.len(),
        order_updates: cost.levels.iter().map(|l| l.order_updates).sum(),
        macro_latency_ns: cost.macro_latency_ns,
        macro_energy_pj: cost.macro_energy_pj,
        annealing_s: sol.trace.phases.annealing_s,
        tour: sol.tour.into_vec(),
    })
}

/// Exact optimal closed tour `(length, tour)` for up to 20 cities.
#[pyfunction]
fn held_karp(instance: &PyInstance) -> PyResult<(u64, Vec<usize>)> {
    let i = &instance.inner;
    let dm = isingtsp::build_distance_matrix(&i.coords, i.edge_weight_type).map_err(py_err)?;
    isingtsp::oracle::held_karp_cycle(&dm).map_err(py_err)
}

/// Conductance levels for a symmetric distance matrix.
#[pyfunction]
#[pyo3(signature = (distances, bits = 4))]
fn quantize(distances: Vec<Vec<u32>>, bits: u32) -> PyResult<Vec<Vec<u16>>> {
    let dm = isingtsp::DistanceMatrix::from_rows(&distances).map_err(py_err)?;
    let w = isingtsp::quantize_weights(&dm, bit_width(bits)?);
    Ok((0..w.n()).map(|i| w.row(i).to_vec()).collect())
}

/// Parses a TSPLIB tour for an instance with `n` nodes.
#[pyfunction]
fn parse_tour(text: &str, n: usize) -> PyResult<Vec<usize>> {
    isingtsp::parse_tour(text, n)
        .map(|t| t.into_vec())
        .map_err(|e| py_err(e.into()))
}

/// Switching probability against write current.
#[pyclass(name = "StochasticModel", module = "isingtsp", frozen)]
struct PyStochasticModel {
    inner: StochasticModel,
}

#[pymethods]
impl PyStochasticModel {
    #[new]
    fn new() -> Self {
        PyStochasticModel {
            inner: StochasticModel::calibrate(),
        }
    }

    #[getter]
    fn midpoint_ua(&self) -> f64 {
        self.inner.midpoint_ua
    }

    #[getter]
    fn slope_ua(&self) -> f64 {
        self.inner.slope_ua
    }

    fn probability(&self, current_ua: f64) -> f64 {
        self.inner.probability(current_ua)
    }

    /// Probability at every current step of the default anneal.
    fn schedule(&self) -> Vec<f64> {
        AnnealSchedule::default().probabilities(&self.inner)
    }
}

/// Sweeps in the default anneal.
#[pyfunction]
fn sweep_count() -> usize {
    AnnealSchedule::default().sweep_count()
}

#[pymodule(name = "isingtsp")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyStochasticModel>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(held_karp, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(parse_tour, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_count, m)?)?;
    Ok(())
}
