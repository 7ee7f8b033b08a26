//! Python bindings. Matrices cross the boundary as lists of rows of
//! `complex`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cpmaps::analysis::{self, ChannelRep, DEFAULT_BLOCH_SAMPLES};
use cpmaps::channels::{self, KrausLabel};
use cpmaps::checks::{self, VERIFY_TIMES};
use cpmaps::io;
use cpmaps::linalg::{ComplexMatrix, DEFAULT_TOL};
use cpmaps::scenarios::{self, MapKind, CASE_NAMES};
use cpmaps::states::DensityMatrix;

type Rows = Vec<Vec<Complex64>>;
type SweepTuple = (f64, f64, f64, f64, f64, f64, f64);

fn err(e: cpmaps::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("matrix must be a non-empty list of equal-length rows"));
    }
    Ok(ComplexMatrix::from_rows(&rows))
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

fn parse_map(map: Option<&str>, s: &scenarios::Scenario) -> PyResult<MapKind> {
    match map {
        Some(m) => m.parse().map_err(err),
        None => Ok(s.default_map()),
    }
}

/// A class of correlated system-environment states with its coupling.
#[pyclass(name = "Scenario", module = "cpmaps_py", frozen)]
struct PyScenario {
    inner: scenarios::Scenario,
}

#[pymethods]
impl PyScenario {
    /// Built-in case: cesar, jpa, figure or discordant-uniform.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Ok(PyScenario {
            inner: scenarios::Scenario::named(name).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyScenario {
            inner: io::parse_scenario(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        io::scenario_to_json(&self.inner).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.spec.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.spec.d()
    }

    #[getter]
    fn dim_e(&self) -> usize {
        self.inner.spec.dim_e()
    }

    #[getter]
    fn is_class_ii(&self) -> bool {
        self.inner.spec.is_class_ii()
    }

    #[getter]
    fn default_map(&self) -> String {
        self.inner.default_map().to_string()
    }

    fn marginal(&self) -> Rows {
        to_rows(cpmaps::states::marginal(&self.inner.spec).matrix())
    }

    fn unitary(&self, t: f64) -> PyResult<Rows> {
        Ok(to_rows(&self.inner.unitary(t).map_err(err)?))
    }

    #[pyo3(signature = (map=None, t=0.0))]
    fn kraus(&self, map: Option<&str>, t: f64) -> PyResult<PyKrausSet> {
        let map = parse_map(map, &self.inner)?;
        Ok(PyKrausSet {
            inner: self.inner.kraus(map, t).map_err(err)?,
        })
    }

    #[pyo3(signature = (map=None, t=0.0))]
    fn channel(&self, map: Option<&str>, t: f64) -> PyResult<PyChannel> {
        let map = parse_map(map, &self.inner)?;
        Ok(PyChannel {
            inner: self.inner.rep(map, t).map_err(err)?,
        })
    }

    /// Extreme points of the compatibility domain followed by the marginal.
    fn domain_samples(&self) -> PyResult<Vec<Rows>> {
        let samples = self.inner.domain_samples().map_err(err)?;
        Ok(samples.iter().map(|s| to_rows(s.matrix())).collect())
    }

    /// Runs the verification suite; returns a dict with `pass` and `checks`.
    #[pyo3(signature = (tol=DEFAULT_TOL, times=None))]
    fn verify<'py>(&self, py: Python<'py>, tol: f64, times: Option<Vec<f64>>) -> PyResult<Bound<'py, PyDict>> {
        let times = times.unwrap_or_else(|| VERIFY_TIMES.to_vec());
        let report = checks::verify(&self.inner, tol, &times).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("scenario", &report.scenario)?;
        out.set_item("tol", report.tol)?;
        out.set_item("pass", report.pass)?;
        let rows: Vec<(String, f64, f64, bool)> = report
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.value, c.threshold, c.pass))
            .collect();
        out.set_item("checks", rows)?;
        Ok(out)
    }

    /// Rows `(t, min_choi_eig_phi1, min_choi_eig_phi2, tp_defect_phi1,
    /// tp_defect_phi2, dist_domain, dist_full)`.
    fn sweep(&self, t_max: f64, steps: usize) -> PyResult<Vec<SweepTuple>> {
        let rows = checks::sweep(&self.inner, t_max, steps).map_err(err)?;
        Ok(rows
            .iter()
            .map(|r| {
                (
                    r.t,
                    r.min_choi_eig_phi1,
                    r.min_choi_eig_phi2,
                    r.tp_defect_phi1,
                    r.tp_defect_phi2,
                    r.dist_domain,
                    r.dist_full,
                )
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(name={:?}, n={}, d={}, dim_e={})",
            self.inner.name,
            self.inner.spec.n(),
            self.inner.spec.d(),
            self.inner.spec.dim_e()
        )
    }
}

/// A trace-preserving set of Kraus operators.
#[pyclass(name = "KrausSet", module = "cpmaps_py", frozen)]
struct PyKrausSet {
    inner: channels::KrausSet,
}

#[pymethods]
impl PyKrausSet {
    #[new]
    #[pyo3(signature = (operators, time_tag=0.0))]
    fn new(operators: Vec<Rows>, time_tag: f64) -> PyResult<Self> {
        let ops = operators.into_iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(PyKrausSet {
            inner: channels::KrausSet::new(ops, KrausLabel::Custom, time_tag).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyKrausSet {
            inner: io::parse_kraus_set(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        io::to_json_string(&self.inner).map_err(err)
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn time_tag(&self) -> f64 {
        self.inner.time_tag()
    }

    #[getter]
    fn operators(&self) -> Vec<Rows> {
        self.inner.operators().iter().map(to_rows).collect()
    }

    fn tp_defect(&self) -> f64 {
        self.inner.tp_defect()
    }

    fn apply(&self, rho: Rows) -> PyResult<Rows> {
        Ok(to_rows(&self.inner.apply(&to_matrix(rho)?).map_err(err)?))
    }

    fn channel(&self) -> PyChannel {
        PyChannel {
            inner: analysis::rep_from_kraus(&self.inner),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Linear map on `n × n` matrices held as both `Λ` and its Choi matrix.
#[pyclass(name = "Channel", module = "cpmaps_py", frozen)]
struct PyChannel {
    inner: ChannelRep,
}

#[pymethods]
impl PyChannel {
    #[staticmethod]
    fn from_lambda(lambda: Rows) -> PyResult<Self> {
        Ok(PyChannel {
            inner: ChannelRep::from_lambda(to_matrix(lambda)?).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_choi(choi: Rows) -> PyResult<Self> {
        Ok(PyChannel {
            inner: ChannelRep::from_choi(to_matrix(choi)?).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn lambda_matrix(&self) -> Rows {
        to_rows(self.inner.lambda())
    }

    #[getter]
    fn choi(&self) -> Rows {
        to_rows(self.inner.choi())
    }

    fn apply(&self, x: Rows) -> PyResult<Rows> {
        Ok(to_rows(&self.inner.apply(&to_matrix(x)?).map_err(err)?))
    }

    /// `self ∘ other`
    fn compose(&self, other: &PyChannel) -> PyResult<PyChannel> {
        Ok(PyChannel {
            inner: self.inner.compose(&other.inner).map_err(err)?,
        })
    }

    #[pyo3(signature = (tol=DEFAULT_TOL))]
    fn cp_report<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = analysis::cp_report(&self.inner, tol).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("min_choi_eig", r.min_choi_eig)?;
        out.set_item("tp_defect", r.tp_defect)?;
        out.set_item("is_cp", r.is_cp)?;
        out.set_item("tol", r.tol)?;
        Ok(out)
    }

    /// Frobenius distance of `Λ`, or the largest output distance over the
    /// given states.
    #[pyo3(signature = (other, states=None))]
    fn distance(&self, other: &PyChannel, states: Option<Vec<Rows>>) -> PyResult<f64> {
        let states = states
            .map(|ss| {
                ss.into_iter()
                    .map(|s| DensityMatrix::new(to_matrix(s)?).map_err(err))
                    .collect::<PyResult<Vec<_>>>()
            })
            .transpose()?;
        analysis::channel_distance(&self.inner, &other.inner, states.as_deref()).map_err(err)
    }

    /// Pairs of input and output Bloch vectors for a qubit channel.
    #[pyo3(signature = (samples=DEFAULT_BLOCH_SAMPLES))]
    fn bloch(&self, samples: usize) -> PyResult<Vec<([f64; 3], [f64; 3])>> {
        let image = analysis::bloch_image(&self.inner, samples).map_err(err)?;
        Ok(image.iter().map(|s| (s.input, s.output)).collect())
    }
}

#[pyfunction]
fn case_names() -> Vec<&'static str> {
    CASE_NAMES.to_vec()
}

/// Files of a golden reproduction keyed by name, and whether every
/// comparison was within tolerance.
#[pyfunction]
fn reproduce(case: &str) -> PyResult<(Vec<(String, String)>, bool)> {
    let r = checks::reproduce(case).map_err(err)?;
    Ok((r.files, r.report.pass))
}

/// The qubit coupling at `ωt`.
#[pyfunction]
fn qubit_unitary(omega_t: f64) -> Rows {
    to_rows(&scenarios::qubit_unitary(omega_t))
}

#[pyfunction]
fn phase_aligned_distance(a: Rows, b: Rows) -> PyResult<f64> {
    scenarios::phase_aligned_distance(&to_matrix(a)?, &to_matrix(b)?).map_err(err)
}

#[pymodule]
fn cpmaps_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyKrausSet>()?;
    m.add_class::<PyChannel>()?;
    m.add_function(wrap_pyfunction!(case_names, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(phase_aligned_distance, m)?)?;
    Ok(())
}
