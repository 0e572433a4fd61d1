//! Primal–dual interior-point method for the second-order cone program
//!
//! ```text
//! minimize t  subject to  |F_j + Σ_k B_jk d_k| ≤ t  for every grid point j,
//! ```
//!
//! used to polish a reweighted-least-squares iterate. Each constraint is a
//! three-dimensional Lorentz cone `(t, Re e_j, Im e_j) ∈ Q`. Iterates follow
//! the Nesterov–Todd scaled central path with Mehrotra predictor–corrector
//! steps, so the iteration count is essentially independent of the grid size.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::point::Complex;

pub(crate) struct SocpOutcome {
    pub d: Vec<Complex>,
    /// Dual objective; a lower bound on the optimum once the dual residual vanishes.
    pub dual_bound: f64,
    /// Cone multipliers `z_j[0]`, summing to one at optimality.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) struct SocpSettings {
    /// Stop once `sᵀz ≤ gap_tolerance · t` and the residuals are negligible.
    pub gap_tolerance: f64,
    pub max_iterations: usize,
}

const STEP_FRACTION: f64 = 0.99;
const DUAL_RESIDUAL: f64 = 1e-9;
/// Relative gap accepted when the iteration breaks down numerically.
const ACCEPTABLE_GAP: f64 = 1e-11;

/// `fixed[j] = F_j`, `dirs[k][j] = B_jk`, `d0` a primal start and `nu` a
/// probability vector for which `d0` is the weighted least-squares optimum
/// (it then yields a dual-feasible start).
pub(crate) fn polish(
    fixed: &[Complex],
    dirs: &[Vec<Complex>],
    d0: &[Complex],
    nu: &[f64],
    settings: &SocpSettings,
) -> SocpOutcome {
    let npts = fixed.len();
    let p = dirs.len();
    let dim = 2 * p + 1;

    let start_norm = residual_max(fixed, dirs, d0);
    let scale = if start_norm > 0.0 { start_norm } else { 1.0 };

    // Rows of the constraint map: s_j = h_j − G_j x = (t, f1 + u1·x, f2 + u2·x).
    let mut u1 = DMatrix::zeros(npts, dim);
    let mut u2 = DMatrix::zeros(npts, dim);
    for (k, col) in dirs.iter().enumerate() {
        for (j, b) in col.iter().enumerate() {
            u1[(j, k)] = b.re;
            u1[(j, p + k)] = -b.im;
            u2[(j, k)] = b.im;
            u2[(j, p + k)] = b.re;
        }
    }
    let f1: Vec<f64> = fixed.iter().map(|f| f.re / scale).collect();
    let f2: Vec<f64> = fixed.iter().map(|f| f.im / scale).collect();
    let apply_g = |x: &DVector<f64>| -> Vec<Vector3<f64>> {
        let a = &u1 * x;
        let b = &u2 * x;
        (0..npts).map(|j| Vector3::new(x[dim - 1], a[j], b[j])).collect()
    };
    // Gᵀ z for z stacked per cone.
    let apply_gt = |z: &[Vector3<f64>]| -> DVector<f64> {
        let z1 = DVector::from_iterator(npts, z.iter().map(|v| v[1]));
        let z2 = DVector::from_iterator(npts, z.iter().map(|v| v[2]));
        let mut out = u1.tr_mul(&z1) + u2.tr_mul(&z2);
        out[dim - 1] += z.iter().map(|v| v[0]).sum::<f64>();
        out
    };
    let h: Vec<Vector3<f64>> = (0..npts).map(|j| Vector3::new(0.0, f1[j], f2[j])).collect();
    let mut c = DVector::zeros(dim);
    c[dim - 1] = 1.0;

    let mut x = DVector::zeros(dim);
    for (k, d) in d0.iter().enumerate() {
        x[k] = d.re / scale;
        x[p + k] = d.im / scale;
    }
    let e0 = apply_g(&x);
    let t0 = 1.001 * (start_norm / scale) + 1e-9;
    x[dim - 1] = t0;
    let mut s: Vec<Vector3<f64>> = (0..npts)
        .map(|j| Vector3::new(t0, f1[j] + e0[j][1], f2[j] + e0[j][2]))
        .collect();
    // z_j = ν_j (1, −κ e_j / t): interior, and dual feasible when d0 is the ν-least-squares optimum.
    let kappa = 0.99;
    let nsum: f64 = nu.iter().sum();
    let mut z: Vec<Vector3<f64>> = s
        .iter()
        .zip(nu)
        .map(|(sj, &n)| {
            let n = (n / nsum).max(1e-14 / npts as f64);
            Vector3::new(n, -kappa * n * sj[1] / t0, -kappa * n * sj[2] / t0)
        })
        .collect();

    let mut iterations = 0;
    let mut converged = false;
    // Last (relative gap, dual residual) seen, for judging an early exit.
    let mut last = (f64::INFINITY, f64::INFINITY);
    while iterations < settings.max_iterations {
        // Residuals: r_x = Gᵀz·(−1) + c … with G = −[e_t; u1; u2] we have Gᵀz = −apply_gt(z).
        let rx = &c - apply_gt(&z);
        let gx = apply_g(&x);
        let rz: Vec<Vector3<f64>> = (0..npts).map(|j| s[j] - h[j] - gx[j]).collect();
        let gap: f64 = s.iter().zip(&z).map(|(a, b)| a.dot(b)).sum();
        let t = x[dim - 1];
        let rx_norm = rx.amax();
        let rz_norm = rz.iter().map(|v| v.amax()).fold(0.0, f64::max);
        if rz_norm > 1e-9 {
            break;
        }
        last = (gap / t.abs().max(1e-300), rx_norm);
        if last.0 <= settings.gap_tolerance && rx_norm <= DUAL_RESIDUAL {
            converged = true;
            break;
        }
        iterations += 1;

        let Some(scalings) = s
            .iter()
            .zip(&z)
            .map(|(a, b)| NtScaling::new(a, b))
            .collect::<Option<Vec<_>>>()
        else {
            break;
        };
        let lambda: Vec<Vector3<f64>> = scalings.iter().zip(&z).map(|(w, zj)| w.w * zj).collect();
        let mu = gap / npts as f64;

        // Normal matrix Σ G_jᵀ W_j⁻² G_j, assembled as YᵀY with Y_j = W_j⁻¹ G_j.
        let mut y = DMatrix::zeros(3 * npts, dim);
        for (j, w) in scalings.iter().enumerate() {
            for col in 0..dim {
                let g = Vector3::new(if col == dim - 1 { 1.0 } else { 0.0 }, u1[(j, col)], u2[(j, col)]);
                let v = w.w_inv * g;
                y[(3 * j, col)] = v[0];
                y[(3 * j + 1, col)] = v[1];
                y[(3 * j + 2, col)] = v[2];
            }
        }
        let normal = y.tr_mul(&y);
        let Some(factor) = factorize(normal) else {
            break;
        };

        // Solve the scaled Newton system for a complementarity right-hand side `ds`.
        let solve = |ds: &[Vector3<f64>]| -> Option<NewtonStep> {
            let v: Vec<Vector3<f64>> = lambda.iter().zip(ds).map(|(l, d)| inverse_product(l, d)).collect();
            // q_j = W⁻¹ v_j + W⁻² r_z, and the system Gᵀ W⁻² G Δx = −r_x − Gᵀ q.
            let q: Vec<Vector3<f64>> = scalings
                .iter()
                .zip(&v)
                .zip(&rz)
                .map(|((w, vj), r)| w.w_inv * vj + w.w_inv * (w.w_inv * r))
                .collect();
            // G = −[e_t; u1; u2] so Gᵀ q = −apply_gt(q) and the sign of both
            // sides flips consistently: M Δx = −r_x + apply_gt(q).
            let rhs = -&rx + apply_gt(&q);
            let dx = factor(&rhs)?;
            let gdx: Vec<Vector3<f64>> = apply_g(&dx).into_iter().map(|v| -v).collect();
            let dz: Vec<Vector3<f64>> = scalings
                .iter()
                .zip(&gdx)
                .zip(&rz)
                .zip(&v)
                .map(|(((w, g), r), vj)| w.w_inv * (w.w_inv * (g + r)) + w.w_inv * vj)
                .collect();
            // The slack is an affine function of x, so its step is taken from
            // Δx directly; this keeps the primal residual at rounding level.
            let ds: Vec<Vector3<f64>> = gdx.iter().zip(&rz).map(|(g, r)| -g - r).collect();
            Some((dx, ds, dz))
        };

        // Predictor.
        let ds_aff: Vec<Vector3<f64>> = lambda.iter().map(|l| -jordan(l, l)).collect();
        let Some((_, ds_a, dz_a)) = solve(&ds_aff) else {
            break;
        };
        let alpha_a = max_step(&s, &ds_a).min(max_step(&z, &dz_a)).min(1.0);
        let gap_a: f64 = (0..npts)
            .map(|j| (s[j] + ds_a[j] * alpha_a).dot(&(z[j] + dz_a[j] * alpha_a)))
            .sum();
        let sigma = (gap_a / gap).clamp(0.0, 1.0).powi(3);

        // Corrector.
        let ds_comb: Vec<Vector3<f64>> = (0..npts)
            .map(|j| {
                let w = &scalings[j];
                let a = w.w_inv * ds_a[j];
                let b = w.w * dz_a[j];
                -jordan(&lambda[j], &lambda[j]) - jordan(&a, &b) + Vector3::new(sigma * mu, 0.0, 0.0)
            })
            .collect();
        let Some((dx, ds, dz)) = solve(&ds_comb) else {
            break;
        };
        let alpha = (STEP_FRACTION * max_step(&s, &ds).min(max_step(&z, &dz))).min(1.0);
        if !(alpha > 0.0) {
            break;
        }
        x += &dx * alpha;
        let gx = apply_g(&x);
        for j in 0..npts {
            s[j] = h[j] + gx[j];
            z[j] += dz[j] * alpha;
        }
        if s.iter().any(|v| jnorm(v).is_none()) {
            break;
        }
    }

    // Rounding can stall the method just short of the requested gap.
    if !converged && last.0 <= ACCEPTABLE_GAP && last.1 <= DUAL_RESIDUAL {
        converged = true;
    }
    let dual_bound = -(0..npts).map(|j| h[j].dot(&z[j])).sum::<f64>() * scale;
    let d: Vec<Complex> = (0..p).map(|k| Complex::new(x[k], x[p + k]) * scale).collect();
    SocpOutcome {
        d,
        dual_bound,
        multipliers: z.iter().map(|v| v[0]).collect(),
        iterations,
        converged,
    }
}

/// Nesterov–Todd scaling `W` of a cone pair (`W z = W⁻¹ s`) and its inverse.
struct NtScaling {
    w: Matrix3<f64>,
    w_inv: Matrix3<f64>,
}

impl NtScaling {
    fn new(s: &Vector3<f64>, z: &Vector3<f64>) -> Option<Self> {
        let sn = jnorm(s)?;
        let zn = jnorm(z)?;
        let sb = s / sn;
        let zb = z / zn;
        let gamma = ((1.0 + sb.dot(&zb)) / 2.0).sqrt();
        let jz = Vector3::new(zb[0], -zb[1], -zb[2]);
        let wb = (sb + jz) / (2.0 * gamma);
        // W = η(2vvᵀ − J) with v the square root of w̄ in the Jordan algebra.
        let v = (wb + Vector3::new(1.0, 0.0, 0.0)) / (2.0 * (wb[0] + 1.0)).sqrt();
        let eta = (sn / zn).sqrt();
        let j = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
        let jv = Vector3::new(v[0], -v[1], -v[2]);
        Some(NtScaling {
            w: (v * v.transpose() * 2.0 - j) * eta,
            w_inv: (jv * jv.transpose() * 2.0 - j) / eta,
        })
    }
}

/// `√(u₀² − |u₁|²)` for interior points.
/// Search direction `(Δx, Δs, Δz)`.
type NewtonStep = (DVector<f64>, Vec<Vector3<f64>>, Vec<Vector3<f64>>);

fn jnorm(u: &Vector3<f64>) -> Option<f64> {
    let a = u[1].hypot(u[2]);
    let v = (u[0] - a) * (u[0] + a);
    (v > 0.0 && u[0] > 0.0).then(|| v.sqrt())
}

/// Jordan product `u ∘ v = (uᵀv, u₀v₁ + v₀u₁)`.
fn jordan(u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(u.dot(v), u[0] * v[1] + v[0] * u[1], u[0] * v[2] + v[0] * u[2])
}

/// Solves `l ∘ v = d` for `v`.
fn inverse_product(l: &Vector3<f64>, d: &Vector3<f64>) -> Vector3<f64> {
    let det = l[0] * l[0] - l[1] * l[1] - l[2] * l[2];
    let v0 = (l[0] * d[0] - l[1] * d[1] - l[2] * d[2]) / det;
    Vector3::new(v0, (d[1] - v0 * l[1]) / l[0], (d[2] - v0 * l[2]) / l[0])
}

/// Largest α such that every `u_j + α d_j` stays in the cone (capped at 1e6).
fn max_step(u: &[Vector3<f64>], d: &[Vector3<f64>]) -> f64 {
    let mut best = 1e6f64;
    for (a, b) in u.iter().zip(d) {
        let cq = a[0] * a[0] - a[1] * a[1] - a[2] * a[2];
        let bq = a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
        let aq = b[0] * b[0] - b[1] * b[1] - b[2] * b[2];
        if b[0] < 0.0 {
            best = best.min(-a[0] / b[0]);
        }
        let disc = bq * bq - aq * cq;
        if aq.abs() <= 1e-300 {
            if bq < 0.0 {
                best = best.min(-cq / (2.0 * bq));
            }
            continue;
        }
        if disc < 0.0 {
            continue;
        }
        let q = -(bq + bq.signum() * disc.sqrt());
        for root in [q / aq, if q != 0.0 { cq / q } else { f64::INFINITY }] {
            if root > 0.0 {
                best = best.min(root);
            }
        }
    }
    best.max(0.0)
}

type Solver = Box<dyn Fn(&DVector<f64>) -> Option<DVector<f64>>>;

/// Cholesky factorization with growing diagonal shifts, LU as a last resort.
fn factorize(m: DMatrix<f64>) -> Option<Solver> {
    let diag_max = m.diagonal().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut shift = 0.0;
    for _ in 0..6 {
        let mut a = m.clone();
        for i in 0..a.nrows() {
            a[(i, i)] += shift;
        }
        if let Some(ch) = a.cholesky() {
            return Some(Box::new(move |b| {
                let x = ch.solve(b);
                x.iter().all(|v| v.is_finite()).then_some(x)
            }));
        }
        shift = if shift == 0.0 { diag_max * 1e-15 } else { shift * 100.0 };
    }
    let lu = m.lu();
    Some(Box::new(move |b| {
        lu.solve(b).filter(|x| x.iter().all(|v| v.is_finite()))
    }))
}

pub(crate) fn residual_max(fixed: &[Complex], dirs: &[Vec<Complex>], d: &[Complex]) -> f64 {
    (0..fixed.len())
        .map(|j| {
            let e = dirs.iter().zip(d).fold(fixed[j], |acc, (col, dk)| acc + col[j] * dk);
            e.norm()
        })
        .fold(0.0, f64::max)
}
