//! Weighted Chebyshev and residual polynomials on a discretized arc.
//!
//! [`solve_minimax`] runs Lawson's reweighted least squares in an orthonormal
//! Arnoldi basis, then polishes the best iterate with a primal–dual
//! interior-point method on the cone formulation of the minimax problem.

mod basis;
mod certificate;
mod grid;
mod kkt;
mod oracle;
mod socp;

use serde::{Deserialize, Serialize};

pub use basis::ArnoldiBasis;
pub use certificate::optimality_certificate;
pub use grid::{build_grid, default_grid_size, theta_nodes, Grid, GridParam, GridStrategy, GridTarget};
pub use oracle::{brute_oracle_minimax, OracleBracket};

use crate::error::{Error, Result};
use crate::point::{Complex, ComplexPoint};

/// Closer than this to a grid point, a point constraint is degenerate.
const NORMALIZATION_CLEARANCE: f64 = 1e-12;
/// Lawson weights never drop below this fraction of the largest weight.
const WEIGHT_FLOOR: f64 = 1e-12;
/// Degrees above this get an `ill_conditioned` flag on monomial export.
pub const MONOMIAL_EXPORT_LIMIT: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Leading coefficient 1 (Chebyshev polynomial).
    Monic,
    /// `P(u0) = 1` (residual polynomial). `u0 = ∞` is the monic problem.
    Point(Complex),
}

impl Normalization {
    pub fn from_point(u0: ComplexPoint) -> Self {
        match u0 {
            ComplexPoint::Infinity => Normalization::Monic,
            ComplexPoint::Finite(z) => Normalization::Point(z),
        }
    }

    pub fn point(&self) -> ComplexPoint {
        match self {
            Normalization::Monic => ComplexPoint::Infinity,
            Normalization::Point(z) => ComplexPoint::Finite(*z),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Budget for Lawson sweeps plus Newton steps.
    pub max_iterations: usize,
    pub lawson_iterations: usize,
    /// Initial Lawson exponent; halved whenever the norm increases.
    pub gamma: f64,
    /// Lawson stops early once the relative norm change is below this.
    pub lawson_tolerance: f64,
    /// Relative duality gap at which the conic polish stops.
    pub gap_tolerance: f64,
    /// Points with `w|P| ≥ (1 − δ)‖wP‖` form the extremal set.
    pub extremal_delta: f64,
    /// Largest acceptable certificate value.
    pub certificate_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 1000,
            lawson_iterations: 25,
            gamma: 1.0,
            lawson_tolerance: 1e-9,
            gap_tolerance: 1e-13,
            extremal_delta: 1e-6,
            certificate_tolerance: 1e-6,
        }
    }
}

/// A polynomial `Σ c_k q_k` in an orthonormal basis, with its grid norm.
#[derive(Clone, Debug, Serialize)]
pub struct PolySolution {
    pub degree: usize,
    pub normalization: Normalization,
    pub basis: ArnoldiBasis,
    pub coefficients: Vec<Complex>,
    /// `max_j w_j |P(x_j)|`
    pub norm: f64,
    /// Lower bound on the grid minimax value (least-squares or conic dual).
    pub lower_bound: f64,
    /// Grid indices of the extremal set.
    pub extremal_set: Vec<usize>,
    pub extremal_params: Vec<GridParam>,
    pub certificate: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionExport {
    pub degree: usize,
    pub normalization: Normalization,
    pub norm: f64,
    pub lower_bound: f64,
    pub certificate: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Constant term first. Only meaningful for moderate degrees.
    pub monomial_coefficients: Vec<Complex>,
    pub ill_conditioned: bool,
    pub extremal_params: Vec<GridParam>,
}

impl PolySolution {
    pub fn eval(&self, u: Complex) -> Complex {
        self.basis
            .eval(u)
            .iter()
            .zip(&self.coefficients)
            .map(|(q, c)| q * c)
            .sum()
    }

    pub fn leading_coefficient(&self) -> Complex {
        self.coefficients[self.degree] * self.basis.leading(self.degree)
    }

    pub fn monomial_coefficients(&self) -> Vec<Complex> {
        self.basis.monomial_coefficients(&self.coefficients)
    }

    pub fn export(&self) -> SolutionExport {
        SolutionExport {
            degree: self.degree,
            normalization: self.normalization,
            norm: self.norm,
            lower_bound: self.lower_bound,
            certificate: self.certificate,
            iterations: self.iterations,
            converged: self.converged,
            monomial_coefficients: self.monomial_coefficients(),
            ill_conditioned: self.degree > MONOMIAL_EXPORT_LIMIT,
            extremal_params: self.extremal_params.clone(),
        }
    }

    /// Wraps a given polynomial (monomial coefficients, constant first) so it
    /// can be certified like a solver output.
    pub fn from_monomials(
        grid: &Grid,
        monomials: &[Complex],
        normalization: Normalization,
        cfg: &SolverConfig,
    ) -> Result<PolySolution> {
        let degree = monomials.len().saturating_sub(1);
        let measure = vec![1.0 / grid.len() as f64; grid.len()];
        let (basis, values) = ArnoldiBasis::build(grid.points(), &measure, degree)?;
        // Coefficients by orthogonal projection, exact for degree ≤ n.
        let poly: Vec<Complex> = grid
            .points()
            .iter()
            .map(|&z| {
                monomials
                    .iter()
                    .rev()
                    .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
            })
            .collect();
        let coefficients: Vec<Complex> = values
            .iter()
            .map(|q| {
                q.iter()
                    .zip(&poly)
                    .zip(&measure)
                    .map(|((q, p), m)| q.conj() * p * m)
                    .sum()
            })
            .collect();
        let mut sol = PolySolution {
            degree,
            normalization,
            basis,
            coefficients,
            norm: 0.0,
            lower_bound: 0.0,
            extremal_set: Vec::new(),
            extremal_params: Vec::new(),
            certificate: f64::NAN,
            iterations: 0,
            converged: false,
        };
        sol.finish(grid, cfg)?;
        Ok(sol)
    }

    /// Recomputes the norm, extremal set and certificate on `grid`.
    fn finish(&mut self, grid: &Grid, cfg: &SolverConfig) -> Result<()> {
        let values: Vec<f64> = grid
            .points()
            .iter()
            .zip(grid.weight_values())
            .map(|(&z, &w)| if w > 0.0 { w * self.eval(z).norm() } else { 0.0 })
            .collect();
        self.norm = values.iter().copied().fold(0.0, f64::max);
        let cut = (1.0 - cfg.extremal_delta) * self.norm;
        self.extremal_set = (0..values.len()).filter(|&j| values[j] >= cut).collect();
        self.extremal_params = self.extremal_set.iter().map(|&j| grid.params()[j]).collect();
        self.certificate = optimality_certificate(self, grid, cfg.extremal_delta)?;
        Ok(())
    }
}

/// Grid-optimal `T_n(·, u0)` for the weights cached on `grid`.
pub fn solve_minimax(
    grid: &Grid,
    degree: usize,
    normalization: Normalization,
    cfg: &SolverConfig,
) -> Result<PolySolution> {
    let required = degree + 2;
    if grid.len() < required {
        return Err(Error::SizeTooSmall {
            size: grid.len(),
            required,
        });
    }
    if grid.len() < 8 * degree + 16 {
        log::warn!(
            "grid of {} points is coarse for degree {degree}; the discrete norm may underestimate",
            grid.len()
        );
    }
    if let Normalization::Point(u0) = normalization {
        if !u0.re.is_finite() || !u0.im.is_finite() {
            return Err(Error::InvalidParameter("normalization point is not finite".into()));
        }
        if grid.points().iter().any(|x| (x - u0).norm() < NORMALIZATION_CLEARANCE) {
            return Err(Error::DegenerateNormalization);
        }
    }

    let active: Vec<usize> = (0..grid.len()).filter(|&j| grid.weight_values()[j] > 0.0).collect();
    if active.len() < degree + 1 {
        return Err(Error::SizeTooSmall {
            size: active.len(),
            required: degree + 1,
        });
    }
    let points: Vec<Complex> = active.iter().map(|&j| grid.points()[j]).collect();
    // Solving with weights scaled to maximum 1 makes the iterates independent
    // of a constant factor in the weight.
    let wscale = active.iter().map(|&j| grid.weight_values()[j]).fold(0.0, f64::max);
    let w: Vec<f64> = active.iter().map(|&j| grid.weight_values()[j] / wscale).collect();
    let npts = points.len();

    if degree == 0 {
        let measure = vec![1.0 / npts as f64; npts];
        let (basis, _) = ArnoldiBasis::build(&points, &measure, 0)?;
        let q0 = basis.eval(Complex::new(0.0, 0.0))[0];
        let mut sol = PolySolution {
            degree,
            normalization,
            basis,
            coefficients: vec![Complex::new(1.0, 0.0) / q0],
            norm: 0.0,
            lower_bound: 0.0,
            extremal_set: Vec::new(),
            extremal_params: Vec::new(),
            certificate: 0.0,
            iterations: 0,
            converged: true,
        };
        sol.finish(grid, cfg)?;
        sol.lower_bound = sol.norm;
        return Ok(sol);
    }

    // Lawson's iteration.
    let mut nu = vec![1.0 / npts as f64; npts];
    let mut gamma = cfg.gamma;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut lower_bound = 0.0f64;
    let mut previous = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..cfg.lawson_iterations {
        iterations += 1;
        let mass: f64 = nu.iter().zip(&w).map(|(n, w)| n * w * w).sum();
        let measure: Vec<f64> = nu.iter().zip(&w).map(|(n, w)| n * w * w / mass).collect();
        let (basis, values) = ArnoldiBasis::build(&points, &measure, degree)?;
        let (coeffs, l2) = least_squares(&basis, degree, normalization);
        lower_bound = lower_bound.max(mass.sqrt() * l2);
        let err: Vec<f64> = (0..npts)
            .map(|j| {
                w[j] * values
                    .iter()
                    .zip(&coeffs)
                    .map(|(q, c)| q[j] * c)
                    .sum::<Complex>()
                    .norm()
            })
            .collect();
        let norm = err.iter().copied().fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(b, _)| norm < *b) {
            best = Some((norm, nu.clone()));
        }
        if norm > previous * (1.0 + 1e-12) {
            gamma = (gamma * 0.5).max(1.0 / 64.0);
        }
        if (previous - norm).abs() <= cfg.lawson_tolerance * norm {
            break;
        }
        previous = norm;
        for (n, e) in nu.iter_mut().zip(&err) {
            *n *= e.powf(gamma);
        }
        let total: f64 = nu.iter().sum();
        let top = nu.iter().copied().fold(0.0, f64::max) / total;
        for n in nu.iter_mut() {
            *n = (*n / total).max(WEIGHT_FLOOR * top);
        }
        let total: f64 = nu.iter().sum();
        for n in nu.iter_mut() {
            *n /= total;
        }
    }
    let (_, best_nu) = best.expect("at least one Lawson sweep");

    // Interior-point polish in a basis adapted to both the Lawson weights and
    // the uniform measure.
    let blend: Vec<f64> = best_nu
        .iter()
        .zip(&w)
        .map(|(n, w)| (0.5 * n + 0.5 / npts as f64) * w * w)
        .collect();
    let mass: f64 = blend.iter().sum();
    let measure: Vec<f64> = blend.iter().map(|b| b / mass).collect();
    let (basis, values) = ArnoldiBasis::build(&points, &measure, degree)?;

    // Starting coefficients: the best Lawson polynomial projected onto the new basis.
    let start = {
        let bmass: f64 = best_nu.iter().zip(&w).map(|(n, w)| n * w * w).sum();
        let bm: Vec<f64> = best_nu.iter().zip(&w).map(|(n, w)| n * w * w / bmass).collect();
        let (b0, v0) = ArnoldiBasis::build(&points, &bm, degree)?;
        let (c0, _) = least_squares(&b0, degree, normalization);
        let p: Vec<Complex> = (0..npts)
            .map(|j| v0.iter().zip(&c0).map(|(q, c)| q[j] * c).sum())
            .collect();
        project(&values, &measure, &p)
    };

    let (fixed_coeffs, null) = constraint_frame(&basis, degree, normalization);
    let combine = |cols: &[Complex]| -> Vec<Complex> {
        (0..npts)
            .map(|j| w[j] * values.iter().zip(cols).map(|(q, c)| q[j] * c).sum::<Complex>())
            .collect()
    };
    let fixed = combine(&fixed_coeffs);
    let dirs: Vec<Vec<Complex>> = null.iter().map(|col| combine(col)).collect();
    let d0: Vec<Complex> = null
        .iter()
        .map(|col| {
            col.iter()
                .zip(start.iter().zip(&fixed_coeffs))
                .map(|(n, (s, f))| n.conj() * (s - f))
                .sum()
        })
        .collect();

    let budget = cfg.max_iterations.saturating_sub(iterations);
    let outcome = socp::polish(
        &fixed,
        &dirs,
        &d0,
        &best_nu,
        &socp::SocpSettings {
            gap_tolerance: cfg.gap_tolerance,
            max_iterations: budget,
        },
    );
    iterations += outcome.iterations;
    if outcome.converged {
        lower_bound = lower_bound.max(outcome.dual_bound);
    }
    let mut d = outcome.d;
    let mut refined = false;
    if let Some(r) = kkt::refine(&fixed, &dirs, &d, &outcome.multipliers) {
        d = r.d;
        // The multipliers solve the optimality system exactly, so their dual
        // value supersedes the interior-point bound.
        lower_bound = r.dual_bound;
        refined = true;
    }

    let mut coefficients = fixed_coeffs.clone();
    for (col, dk) in null.iter().zip(&d) {
        for (c, n) in coefficients.iter_mut().zip(col) {
            *c += n * dk;
        }
    }
    let mut sol = PolySolution {
        degree,
        normalization,
        basis,
        coefficients,
        norm: 0.0,
        lower_bound: lower_bound * wscale,
        extremal_set: Vec::new(),
        extremal_params: Vec::new(),
        certificate: f64::NAN,
        iterations,
        converged: false,
    };
    sol.finish(grid, cfg)?;
    sol.converged = outcome.converged || refined || sol.certificate <= cfg.certificate_tolerance;
    if !sol.converged || iterations > cfg.max_iterations {
        return Err(Error::NoConvergence {
            solution: Box::new(sol),
        });
    }
    Ok(sol)
}

/// Least-squares optimal coefficients in an orthonormal basis and the
/// corresponding L² norm.
fn least_squares(basis: &ArnoldiBasis, degree: usize, normalization: Normalization) -> (Vec<Complex>, f64) {
    let zero = Complex::new(0.0, 0.0);
    match normalization {
        Normalization::Monic => {
            let lead = basis.leading(degree);
            let mut c = vec![zero; degree + 1];
            c[degree] = Complex::new(1.0 / lead, 0.0);
            (c, 1.0 / lead)
        }
        Normalization::Point(u0) => {
            let v = basis.eval(u0);
            let n2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            (v.iter().map(|x| x.conj() / n2).collect(), 1.0 / n2.sqrt())
        }
    }
}

fn project(values: &[Vec<Complex>], measure: &[f64], p: &[Complex]) -> Vec<Complex> {
    values
        .iter()
        .map(|q| q.iter().zip(p).zip(measure).map(|((q, p), m)| q.conj() * p * m).sum())
        .collect()
}

/// A particular coefficient vector satisfying the normalization and an
/// orthonormal basis (columns) of the homogeneous constraint.
pub(crate) fn constraint_frame(
    basis: &ArnoldiBasis,
    degree: usize,
    normalization: Normalization,
) -> (Vec<Complex>, Vec<Vec<Complex>>) {
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    match normalization {
        Normalization::Monic => {
            let (c, _) = least_squares(basis, degree, normalization);
            let null = (0..degree)
                .map(|k| {
                    let mut col = vec![zero; degree + 1];
                    col[k] = one;
                    col
                })
                .collect();
            (c, null)
        }
        Normalization::Point(u0) => {
            let v = basis.eval(u0);
            let n2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            let c0: Vec<Complex> = v.iter().map(|x| x.conj() / n2).collect();
            // Householder reflector mapping a = conj(v)/|v| to a multiple of e_p;
            // its other columns span {c : Σ v_k c_k = 0}.
            let nv = n2.sqrt();
            let a: Vec<Complex> = v.iter().map(|x| x.conj() / nv).collect();
            let pivot = (0..a.len())
                .max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()))
                .unwrap_or(0);
            let phase = if a[pivot].norm() > 0.0 {
                a[pivot] / a[pivot].norm()
            } else {
                one
            };
            let mut u = a.clone();
            u[pivot] += phase;
            let uu: f64 = u.iter().map(|x| x.norm_sqr()).sum();
            let null = (0..=degree)
                .filter(|&k| k != pivot)
                .map(|k| {
                    let factor = u[k].conj() * (2.0 / uu);
                    (0..=degree)
                        .map(|i| if i == k { one } else { zero } - u[i] * factor)
                        .collect()
                })
                .collect();
            (c0, null)
        }
    }
}

/// `‖T_n‖ / Cap^n` for monic solutions, `e^{n g(u0)} ‖T_n(·, u0)‖` for
/// point-normalized ones.
pub fn widom_factor(sol: &PolySolution, capacity: f64) -> f64 {
    sol.norm / capacity.powi(sol.degree as i32)
}

/// Widom factor of a point-normalized solution, `e^{n g(u0)} ‖T_n(·, u0)‖`.
pub fn residual_widom_factor(sol: &PolySolution, green_at_u0: f64) -> f64 {
    sol.norm * (sol.degree as f64 * green_at_u0).exp()
}

/// `R_n(u, u0) = T_n(u, u0) / ‖T_n(·, u0)‖`.
pub fn residual_value(sol: &PolySolution, u: Complex) -> Result<Complex> {
    match sol.normalization {
        Normalization::Point(_) if sol.norm > 0.0 => Ok(sol.eval(u) / sol.norm),
        Normalization::Point(_) => Err(Error::EmptyExtremalSet),
        Normalization::Monic => Err(Error::WrongNormalization { expected: "point" }),
    }
}
