//! Python bindings: arc geometry, weights, minimax solves, lemniscate
//! reductions and closed-form limit predictions.

use std::collections::BTreeMap;

use arcwidom::asymptotics::{self, PredictionReport};
use arcwidom::lemniscate;
use arcwidom::minimax::{self, default_grid_size};
use arcwidom::potential;
use arcwidom::{
    ArcDomain, Complex, ComplexPoint, GridStrategy, LemniscateSpec, Normalization, SolverConfig, WeightSpec,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(
    pyarcwidom,
    ArcwidomError,
    PyException,
    "Domain or numerical failure in arcwidom."
);
create_exception!(
    pyarcwidom,
    NoConvergenceError,
    ArcwidomError,
    "The minimax solver stopped before certifying optimality."
);

fn to_py(e: arcwidom::Error) -> PyErr {
    match e {
        arcwidom::Error::NoConvergence { .. } => NoConvergenceError::new_err(e.to_string()),
        arcwidom::Error::InvalidWeight(_) => PyValueError::new_err(e.to_string()),
        _ => ArcwidomError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for arcwidom::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// `None` stands for the point at infinity.
fn point(z: Option<Complex>) -> ComplexPoint {
    z.map_or(ComplexPoint::Infinity, ComplexPoint::Finite)
}

fn strategy(name: &str) -> PyResult<GridStrategy> {
    match name {
        "chebyshev" => Ok(GridStrategy::ChebyshevTheta),
        "uniform" => Ok(GridStrategy::UniformTheta),
        "hybrid" => Ok(GridStrategy::Hybrid),
        other => Err(PyValueError::new_err(format!(
            "unknown grid strategy '{other}' (chebyshev, uniform, hybrid)"
        ))),
    }
}

/// The arc `{e^{iθ} : |θ| ≤ α}`.
#[pyclass(name = "Arc", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyArc {
    inner: ArcDomain,
}

#[pymethods]
impl PyArc {
    #[new]
    fn new(alpha: f64) -> PyResult<Self> {
        Ok(PyArc {
            inner: ArcDomain::new(alpha).py_err()?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    /// Logarithmic capacity `sin(α/2)`.
    #[getter]
    fn capacity(&self) -> f64 {
        self.inner.capacity()
    }

    /// `2cos²(α/4)`, the Widom limit for the unit weight.
    #[getter]
    fn alpha_constant(&self) -> f64 {
        self.inner.alpha_constant()
    }

    /// Green's function with pole at infinity.
    fn green(&self, z: Complex) -> PyResult<f64> {
        potential::green_inf(ComplexPoint::Finite(z), &self.inner).py_err()
    }

    /// `c(r, α) = exp(g(1/r))`.
    fn c_r(&self, r: f64) -> PyResult<f64> {
        potential::c_r_alpha(r, &self.inner).py_err()
    }

    /// Exterior conformal map to `{|w| > capacity}`.
    fn exterior_map(&self, z: Complex) -> PyResult<Option<Complex>> {
        Ok(potential::exterior_map(ComplexPoint::Finite(z), &self.inner)
            .py_err()?
            .finite())
    }

    /// `∫ log w dμ` against the equilibrium measure.
    fn mu_log_integral(&self, weight: &PyWeight) -> PyResult<f64> {
        potential::mu_log_integral(&weight.inner, &self.inner).py_err()
    }

    /// `∫ log w dω(u0)` against harmonic measure; `u0=None` is infinity.
    #[pyo3(signature = (weight, u0=None))]
    fn omega_log_integral(&self, weight: &PyWeight, u0: Option<Complex>) -> PyResult<f64> {
        potential::harmonic_measure_log_integral(&weight.inner, point(u0), &self.inner).py_err()
    }

    fn __repr__(&self) -> String {
        format!("Arc(alpha={})", self.inner.alpha())
    }
}

/// Weight `C · Π|u − a_j|^{s_j} · base(θ)` on the arc.
#[pyclass(name = "Weight", frozen, from_py_object)]
#[derive(Clone)]
struct PyWeight {
    inner: WeightSpec,
}

#[pymethods]
impl PyWeight {
    /// The unit weight; combine with `with_power` and `scaled`.
    #[new]
    fn new() -> Self {
        PyWeight {
            inner: WeightSpec::unit(),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyWeight {
            inner: WeightSpec::from_json(text).py_err()?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn with_power(&self, node: Complex, exponent: f64) -> Self {
        PyWeight {
            inner: self.inner.clone().with_power(node, exponent),
        }
    }

    fn scaled(&self, c: f64) -> PyResult<Self> {
        Ok(PyWeight {
            inner: self.inner.clone().scaled(c).py_err()?,
        })
    }

    /// Value at a point of the arc.
    fn __call__(&self, u: Complex, arc: &PyArc) -> PyResult<f64> {
        self.inner.eval(u, &arc.inner).py_err()
    }

    fn __repr__(&self) -> String {
        format!("Weight({})", self.inner.to_json())
    }
}

/// Grid-optimal `T_n(·, u0)` with its certificate.
#[pyclass(name = "Solution", frozen)]
struct PySolution {
    inner: arcwidom::PolySolution,
    widom: f64,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree
    }

    /// Weighted sup norm on the grid.
    #[getter]
    fn norm(&self) -> f64 {
        self.inner.norm
    }

    #[getter]
    fn lower_bound(&self) -> f64 {
        self.inner.lower_bound
    }

    #[getter]
    fn certificate(&self) -> f64 {
        self.inner.certificate
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn widom(&self) -> f64 {
        self.widom
    }

    /// Normalization point; `None` for monic.
    #[getter]
    fn point(&self) -> Option<Complex> {
        self.inner.normalization.point().finite()
    }

    /// Monomial coefficients, constant term first.
    #[getter]
    fn coefficients(&self) -> Vec<Complex> {
        self.inner.monomial_coefficients()
    }

    fn __call__(&self, u: Complex) -> Complex {
        self.inner.eval(u)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.export()).expect("serializable solution")
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(degree={}, norm={}, widom={}, certificate={:e})",
            self.inner.degree, self.inner.norm, self.widom, self.inner.certificate
        )
    }
}

/// Solves `min ‖w P‖` over degree-`n` polynomials on the arc grid, monic
/// when `point` is `None` and with `P(point) = 1` otherwise.
#[pyfunction]
#[pyo3(signature = (alpha, n, weight=None, point=None, grid=None, strategy="chebyshev", allow_singular=false))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    alpha: f64,
    n: usize,
    weight: Option<PyWeight>,
    point: Option<Complex>,
    grid: Option<usize>,
    strategy: &str,
    allow_singular: bool,
) -> PyResult<PySolution> {
    let domain = ArcDomain::new(alpha).py_err()?;
    let weight = weight.map_or_else(WeightSpec::unit, |w| w.inner);
    let strategy = self::strategy(strategy)?;
    let u0 = self::point(point);
    py.detach(|| {
        let grid = arcwidom::Grid::weighted(
            &domain,
            grid.unwrap_or_else(|| default_grid_size(n)),
            strategy,
            &weight,
            allow_singular,
        )?;
        let sol = minimax::solve_minimax(&grid, n, Normalization::from_point(u0), &SolverConfig::default())?;
        let widom = match u0 {
            ComplexPoint::Infinity => minimax::widom_factor(&sol, domain.capacity()),
            _ => minimax::residual_widom_factor(&sol, potential::green_inf(u0, &domain)?),
        };
        Ok(PySolution { inner: sol, widom })
    })
    .py_err()
}

/// Closed-form limit with optional Szegő-type bounds.
#[pyclass(name = "Prediction", frozen)]
struct PyPrediction {
    inner: PredictionReport,
}

#[pymethods]
impl PyPrediction {
    #[getter]
    fn kind(&self) -> String {
        serde_json::to_value(self.inner.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }

    #[getter]
    fn value(&self) -> f64 {
        self.inner.value
    }

    #[getter]
    fn lower_bound(&self) -> Option<f64> {
        self.inner.lower_bound
    }

    #[getter]
    fn upper_bound(&self) -> Option<f64> {
        self.inner.upper_bound
    }

    #[getter]
    fn components(&self) -> BTreeMap<String, f64> {
        self.inner.components.clone()
    }

    /// `(u, value)` pairs of a residual-modulus profile.
    #[getter]
    fn profile(&self) -> Option<Vec<(Option<Complex>, f64)>> {
        self.inner
            .profile
            .as_ref()
            .map(|p| p.iter().map(|s| (s.u.finite(), s.value)).collect())
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable report")
    }

    fn __repr__(&self) -> String {
        format!("Prediction(kind={}, value={})", self.kind(), self.inner.value)
    }
}

/// Limit of `e^{n g(u0)} ‖w T_n(·, u0)‖`; the Widom limit when `point` is `None`.
#[pyfunction]
#[pyo3(signature = (alpha, weight=None, point=None, allow_singular=false))]
fn predict(
    alpha: f64,
    weight: Option<PyWeight>,
    point: Option<Complex>,
    allow_singular: bool,
) -> PyResult<PyPrediction> {
    let domain = ArcDomain::new(alpha).py_err()?;
    let weight = weight.map_or_else(WeightSpec::unit, |w| w.inner);
    weight.validate(&domain, allow_singular).py_err()?;
    let inner = match self::point(point) {
        ComplexPoint::Infinity => asymptotics::predict_widom_limit(&weight, &domain),
        u0 => asymptotics::predict_pointwise_limit(&weight, u0, &domain),
    }
    .py_err()?;
    Ok(PyPrediction { inner })
}

/// Limiting `e^{−n g(u)} |R_n(u, u0)|` at each of `points`.
#[pyfunction]
#[pyo3(signature = (alpha, point, points, weight=None))]
fn residual_profile(
    alpha: f64,
    point: Complex,
    points: Vec<Complex>,
    weight: Option<PyWeight>,
) -> PyResult<PyPrediction> {
    let domain = ArcDomain::new(alpha).py_err()?;
    let weight = weight.map_or_else(WeightSpec::unit, |w| w.inner);
    let pts: Vec<ComplexPoint> = points.into_iter().map(ComplexPoint::Finite).collect();
    let inner = asymptotics::residual_modulus_profile(&weight, ComplexPoint::Finite(point), &pts, &domain).py_err()?;
    Ok(PyPrediction { inner })
}

/// Widom-factor limit on `{z : z^m + 1 ∈ rΓ_α}` along degrees `nm + l`.
#[pyfunction]
fn predict_lemniscate(m: u32, r: f64, alpha: f64, l: u32) -> PyResult<PyPrediction> {
    let spec = LemniscateSpec::new(m, r, alpha, l).py_err()?;
    Ok(PyPrediction {
        inner: asymptotics::predict_lemniscate_limit(&spec).py_err()?,
    })
}

/// Direct solve on the lemniscatic arc against the reduction, as a dict.
#[pyfunction]
#[pyo3(signature = (m, r, alpha, l, n, grid=None, strategy="chebyshev"))]
#[allow(clippy::too_many_arguments)]
fn lemniscate_compare(
    py: Python<'_>,
    m: u32,
    r: f64,
    alpha: f64,
    l: u32,
    n: usize,
    grid: Option<usize>,
    strategy: &str,
) -> PyResult<BTreeMap<String, f64>> {
    let spec = LemniscateSpec::new(m, r, alpha, l).py_err()?;
    let strategy = self::strategy(strategy)?;
    let size = grid.unwrap_or_else(|| default_grid_size(n));
    let rec = py
        .detach(|| lemniscate::direct_vs_reduced(&spec, n, size, strategy, &SolverConfig::default()))
        .py_err()?;
    Ok(BTreeMap::from([
        ("degree".into(), rec.degree as f64),
        ("direct_norm".into(), rec.direct_norm),
        ("reduced_norm".into(), rec.reduced_norm),
        ("scale".into(), rec.scale),
        ("gap".into(), rec.gap),
        ("widom_direct".into(), rec.widom_direct),
        ("widom_reduced".into(), rec.widom_reduced),
        ("widom_predicted".into(), rec.widom_predicted),
    ]))
}

/// Fits `L + a/n (+ b/n²)`; returns `(limit, residual)`.
#[pyfunction]
fn extrapolate(ns: Vec<usize>, values: Vec<f64>) -> PyResult<(f64, f64)> {
    let fit = asymptotics::richardson_extrapolate(&ns, &values).py_err()?;
    Ok((fit.limit, fit.residual))
}

#[pymodule]
fn pyarcwidom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyArc>()?;
    m.add_class::<PyWeight>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyPrediction>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(residual_profile, m)?)?;
    m.add_function(wrap_pyfunction!(predict_lemniscate, m)?)?;
    m.add_function(wrap_pyfunction!(lemniscate_compare, m)?)?;
    m.add_function(wrap_pyfunction!(extrapolate, m)?)?;
    m.add("ArcwidomError", m.py().get_type::<ArcwidomError>())?;
    m.add("NoConvergenceError", m.py().get_type::<NoConvergenceError>())?;
    Ok(())
}
