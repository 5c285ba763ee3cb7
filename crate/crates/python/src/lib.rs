//! Python bindings: distance tables, normal functions, weights and the
//! solvers, each solver returning a `Certificate`.
//!
//! Tables are lists of lists of floats; `float("inf")` marks points outside
//! a potential's domain.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use zvp_core::report::TAU_AXIOM;
use zvp_core::{almost_metric, equilibrium, generate, normal_fn, solver, zhong, Error};

create_exception!(zvp, ZvpError, PyValueError, "Invalid input or failed precondition.");
create_exception!(zvp, PremiseError, ZvpError, "The quantitative premise of a local statement does not hold.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Premise { .. } => PremiseError::new_err(e.to_string()),
        _ => ZvpError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for zvp_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializes")
}

#[pyclass(name = "AlmostMetric", frozen)]
struct PyAlmostMetric(zvp_core::AlmostMetricTable);

#[pymethods]
impl PyAlmostMetric {
    #[new]
    #[pyo3(signature = (rows, tol = TAU_AXIOM))]
    fn new(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<Self> {
        zvp_core::AlmostMetricTable::new(&rows, tol).py().map(Self)
    }

    /// Min-plus closure of a table with positive off-diagonal entries.
    #[staticmethod]
    fn closure(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        almost_metric::metric_closure(&rows).py().map(Self)
    }

    /// Seeded random closed table with `n` points.
    #[staticmethod]
    fn random(seed: u64, n: usize) -> PyResult<Self> {
        generate::space_from_seed(seed, n).py().map(Self)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn get(&self, x: usize, y: usize) -> PyResult<f64> {
        if x >= self.0.n() || y >= self.0.n() {
            return Err(ZvpError::new_err(format!("point outside a space of size {}", self.0.n())));
        }
        Ok(self.0.get(x, y))
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows()
    }

    fn is_symmetric(&self) -> bool {
        self.0.is_symmetric()
    }

    fn __repr__(&self) -> String {
        format!("AlmostMetric(n={})", self.0.n())
    }
}

#[pyclass(name = "ValidationReport", frozen)]
struct PyReport(zvp_core::ValidationReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed
    }

    #[getter]
    fn checked(&self) -> usize {
        self.0.checked
    }

    /// `(axiom, magnitude)` for each violation.
    fn violations(&self) -> Vec<(String, f64)> {
        self.0.violations.iter().map(|v| (v.axiom.clone(), v.magnitude)).collect()
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("ValidationReport(passed={}, violations={})", self.0.passed, self.0.violations.len())
    }
}

#[pyfunction]
#[pyo3(signature = (rows, tol = TAU_AXIOM))]
fn validate_almost_metric(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<PyReport> {
    almost_metric::validate_almost_metric(&rows, tol).py().map(PyReport)
}

#[pyclass(name = "NormalFunction", frozen)]
struct PyNormal(zvp_core::NormalFunction);

#[pymethods]
impl PyNormal {
    #[staticmethod]
    fn one() -> Self {
        Self(zvp_core::NormalFunction::One)
    }

    #[staticmethod]
    fn inv1p() -> Self {
        Self(zvp_core::NormalFunction::Inv1p)
    }

    #[staticmethod]
    fn inv_sqrt1p() -> Self {
        Self(zvp_core::NormalFunction::InvSqrt1p)
    }

    #[staticmethod]
    fn constant(c: f64) -> PyResult<Self> {
        zvp_core::NormalFunction::constant(c).py().map(Self)
    }

    /// Piecewise-linear density through `(t, b)` pairs starting at `t = 0`.
    #[staticmethod]
    fn tabulated(samples: Vec<(f64, f64)>) -> PyResult<Self> {
        let s: Vec<[f64; 2]> = samples.into_iter().map(|(t, b)| [t, b]).collect();
        zvp_core::NormalFunction::tabulated(&s).py().map(Self)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name()
    }

    fn density(&self, t: f64) -> PyResult<f64> {
        self.0.density(t).py()
    }

    fn integral(&self, t: f64) -> PyResult<f64> {
        self.0.integral(t).py()
    }

    fn inverse_integral(&self, s: f64) -> PyResult<f64> {
        self.0.inverse_integral(s).py()
    }

    /// Passes when every sampled property holds within `tol`.
    #[pyo3(signature = (seed = 0, count = 10_000, tol = 1e-6))]
    fn check_properties(&self, seed: u64, count: usize, tol: f64) -> PyResult<PyReport> {
        let samples = normal_fn::random_property_samples(seed, count, 20.0);
        normal_fn::check_p2_properties(&self.0, &samples, tol).py().map(PyReport)
    }

    fn __repr__(&self) -> String {
        format!("NormalFunction({})", self.0.name())
    }
}

#[pyfunction]
fn weight_from_anchor(d: &PyAlmostMetric, a: usize) -> PyResult<Vec<f64>> {
    zhong::weight_from_anchor(&d.0, a).py().map(|w| w.values().to_vec())
}

#[pyfunction]
fn weight_infimal(d: &PyAlmostMetric, g: Vec<f64>) -> PyResult<Vec<f64>> {
    zhong::weight_infimal(&d.0, &g).py().map(|w| w.values().to_vec())
}

/// The derived metric `e(x, y) = B(G(x) + d(x, y)) - B(G(x))`.
#[pyfunction]
#[pyo3(signature = (d, weight, normal, tol = TAU_AXIOM))]
fn zhong_metric(d: &PyAlmostMetric, weight: Vec<f64>, normal: &PyNormal, tol: f64) -> PyResult<PyAlmostMetric> {
    let w = zhong::Weight::new(weight).py()?;
    let z = zhong::build_zhong(&d.0, &w, &normal.0, tol).py()?;
    Ok(PyAlmostMetric(z.derived().clone()))
}

#[pyclass(name = "Certificate", frozen)]
struct PyCertificate(solver::Certificate);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn theorem(&self) -> String {
        self.0.theorem.to_string()
    }

    #[getter]
    fn u(&self) -> usize {
        self.0.u
    }

    #[getter]
    fn v(&self) -> usize {
        self.0.v
    }

    #[getter]
    fn chain(&self) -> Vec<usize> {
        self.0.chain.clone()
    }

    #[pyo3(signature = (tol = TAU_AXIOM))]
    fn holds(&self, tol: f64) -> bool {
        self.0.holds(tol)
    }

    /// `name -> slack` for every inequality in the certificate.
    fn slacks(&self) -> Vec<(String, f64)> {
        self.0.inequalities.iter().map(|q| (q.name.clone(), q.slack)).collect()
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Certificate(theorem={}, u={}, v={}, holds={})", self.0.theorem, self.0.u, self.0.v, self.0.holds(TAU_AXIOM))
    }
}

fn potential(phi: Vec<f64>) -> PyResult<solver::Potential> {
    solver::Potential::new(phi).py()
}

fn bifunction(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<equilibrium::Bifunction> {
    equilibrium::Bifunction::new(&rows, tol).py()
}

fn derived(d: &PyAlmostMetric, weight: Vec<f64>, normal: &PyNormal, tol: f64) -> PyResult<zhong::ZhongMetric> {
    let w = zhong::Weight::new(weight).py()?;
    zhong::build_zhong(&d.0, &w, &normal.0, tol).py()
}

#[pyfunction]
fn evp_point(u: usize, e: &PyAlmostMetric, phi: Vec<f64>) -> PyResult<PyCertificate> {
    solver::evp_point(u, &e.0, &potential(phi)?).py().map(PyCertificate)
}

#[pyfunction]
fn evp_local(u: usize, rho: f64, e: &PyAlmostMetric, phi: Vec<f64>) -> PyResult<PyCertificate> {
    solver::evp_local(u, rho, &e.0, &potential(phi)?).py().map(PyCertificate)
}

#[pyfunction]
#[pyo3(signature = (u, d, phi, normal, weight, tol = TAU_AXIOM))]
fn zvp_point(
    u: usize,
    d: &PyAlmostMetric,
    phi: Vec<f64>,
    normal: &PyNormal,
    weight: Vec<f64>,
    tol: f64,
) -> PyResult<PyCertificate> {
    let z = derived(d, weight, normal, tol)?;
    solver::zvp_point_on(u, &z, &potential(phi)?).py().map(PyCertificate)
}

#[pyfunction]
#[pyo3(signature = (u, rho, d, phi, normal, weight, tol = TAU_AXIOM))]
#[allow(clippy::too_many_arguments)]
fn zvp_local(
    u: usize,
    rho: f64,
    d: &PyAlmostMetric,
    phi: Vec<f64>,
    normal: &PyNormal,
    weight: Vec<f64>,
    tol: f64,
) -> PyResult<PyCertificate> {
    let z = derived(d, weight, normal, tol)?;
    solver::zvp_local_on(u, rho, &z, &potential(phi)?).py().map(PyCertificate)
}

#[pyfunction]
#[pyo3(signature = (u, f, d, e, tol = TAU_AXIOM))]
fn equilibrium_via_e(u: usize, f: Vec<Vec<f64>>, d: &PyAlmostMetric, e: &PyAlmostMetric, tol: f64) -> PyResult<PyCertificate> {
    equilibrium::equilibrium_via_e(u, &bifunction(f, tol)?, &d.0, &e.0).py().map(PyCertificate)
}

#[pyfunction]
#[pyo3(signature = (u, f, d, normal, weight, rho = None, tol = TAU_AXIOM))]
fn equilibrium_zhong(
    u: usize,
    f: Vec<Vec<f64>>,
    d: &PyAlmostMetric,
    normal: &PyNormal,
    weight: Vec<f64>,
    rho: Option<f64>,
    tol: f64,
) -> PyResult<PyCertificate> {
    let z = derived(d, weight, normal, tol)?;
    equilibrium::equilibrium_zhong_on(u, &bifunction(f, tol)?, &z, rho).py().map(PyCertificate)
}

#[pyfunction]
#[pyo3(signature = (u, f, d, tol = TAU_AXIOM))]
fn bkp_point(u: usize, f: Vec<Vec<f64>>, d: &PyAlmostMetric, tol: f64) -> PyResult<PyCertificate> {
    equilibrium::bkp_point(u, &bifunction(f, tol)?, &d.0).py().map(PyCertificate)
}

#[pymodule]
fn zvp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ZvpError", m.py().get_type::<ZvpError>())?;
    m.add("PremiseError", m.py().get_type::<PremiseError>())?;
    m.add_class::<PyAlmostMetric>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyNormal>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(validate_almost_metric, m)?)?;
    m.add_function(wrap_pyfunction!(weight_from_anchor, m)?)?;
    m.add_function(wrap_pyfunction!(weight_infimal, m)?)?;
    m.add_function(wrap_pyfunction!(zhong_metric, m)?)?;
    m.add_function(wrap_pyfunction!(evp_point, m)?)?;
    m.add_function(wrap_pyfunction!(evp_local, m)?)?;
    m.add_function(wrap_pyfunction!(zvp_point, m)?)?;
    m.add_function(wrap_pyfunction!(zvp_local, m)?)?;
    m.add_function(wrap_pyfunction!(equilibrium_via_e, m)?)?;
    m.add_function(wrap_pyfunction!(equilibrium_zhong, m)?)?;
    m.add_function(wrap_pyfunction!(bkp_point, m)?)?;
    Ok(())
}
