//! Newton's method on the optimality system of the grid minimax problem.
//!
//! Near the optimum the norm is flat to second order in the coefficients, so
//! an interior-point iterate with a relative gap of 1e-13 can still be off by
//! 1e-7 in the coefficients. Once the support of the optimal measure is known,
//! the optimum solves the square system
//!
//! ```text
//! |e_j|² = t²                    for j in the support S,
//! Σ_j λ_j conj(e_j) B_jk = 0     for every direction k,
//! Σ_j λ_j = 1,
//! ```
//!
//! in the unknowns `(d, t, λ)`, which Newton's method solves to rounding
//! level. The result is accepted only if it is a verified optimum.

use nalgebra::{DMatrix, DVector};

use crate::point::Complex;

const MAX_STEPS: usize = 30;
/// Multipliers below this fraction of the largest are outside the support.
const SUPPORT_CUT: f64 = 1e-6;

pub(crate) struct Refined {
    pub d: Vec<Complex>,
    /// `Σ λ_j Re(conj(e_j/|e_j|) F_j)`, the dual value of the multipliers.
    pub dual_bound: f64,
}

/// Refines `d` given approximate cone multipliers. Returns `None` when the
/// support system is singular, Newton fails, or the result does not beat
/// `d` while satisfying the optimality conditions.
pub(crate) fn refine(fixed: &[Complex], dirs: &[Vec<Complex>], d: &[Complex], multipliers: &[f64]) -> Option<Refined> {
    let p = dirs.len();
    let npts = fixed.len();
    if p == 0 {
        return None;
    }
    let residual = |d: &[Complex], j: usize| dirs.iter().zip(d).fold(fixed[j], |acc, (col, dk)| acc + col[j] * dk);
    let start_norm = (0..npts).map(|j| residual(d, j).norm()).fold(0.0, f64::max);
    if !(start_norm > 0.0) {
        return None;
    }

    let top = multipliers.iter().copied().fold(0.0, f64::max);
    let support: Vec<usize> = (0..npts)
        .filter(|&j| multipliers[j] >= SUPPORT_CUT * top && residual(d, j).norm() >= (1.0 - 1e-4) * start_norm)
        .collect();
    if support.is_empty() || support.len() > 2 * p + 1 {
        return None;
    }
    let ns = support.len();
    let total: f64 = support.iter().map(|&j| multipliers[j]).sum();

    // Work with t normalized to 1 at the start.
    let scale = start_norm;
    let mut dv: Vec<Complex> = d.iter().map(|x| x / scale).collect();
    let f: Vec<Complex> = support.iter().map(|&j| fixed[j] / scale).collect();
    let b: Vec<Vec<Complex>> = dirs
        .iter()
        .map(|col| support.iter().map(|&j| col[j]).collect())
        .collect();
    let mut t = 1.0;
    let mut lambda: Vec<f64> = support.iter().map(|&j| multipliers[j] / total).collect();

    let dim = 2 * p + 1 + ns;
    let mut converged = false;
    for _ in 0..MAX_STEPS {
        let e: Vec<Complex> = (0..ns)
            .map(|i| b.iter().zip(&dv).fold(f[i], |acc, (col, dk)| acc + col[i] * dk))
            .collect();
        let mut rhs = DVector::zeros(dim);
        let mut jac = DMatrix::zeros(dim, dim);
        // Rows 0..ns: |e_i|² − t².
        for i in 0..ns {
            rhs[i] = e[i].norm_sqr() - t * t;
            for k in 0..p {
                let g = e[i].conj() * b[k][i];
                jac[(i, k)] = 2.0 * g.re;
                jac[(i, p + k)] = -2.0 * g.im;
            }
            jac[(i, 2 * p)] = -2.0 * t;
        }
        // Rows ns..ns+2p: stationarity, real and imaginary parts.
        for k in 0..p {
            let (re_row, im_row) = (ns + k, ns + p + k);
            let mut g = Complex::new(0.0, 0.0);
            for i in 0..ns {
                let c = e[i].conj() * b[k][i];
                g += lambda[i] * c;
                jac[(re_row, 2 * p + 1 + i)] = c.re;
                jac[(im_row, 2 * p + 1 + i)] = c.im;
            }
            rhs[re_row] = g.re;
            rhs[im_row] = g.im;
            for l in 0..p {
                let h: Complex = (0..ns).map(|i| lambda[i] * b[l][i].conj() * b[k][i]).sum();
                // ∂G_k/∂Re d_l = h, ∂G_k/∂Im d_l = −i h.
                jac[(re_row, l)] = h.re;
                jac[(im_row, l)] = h.im;
                jac[(re_row, p + l)] = h.im;
                jac[(im_row, p + l)] = -h.re;
            }
        }
        // Last row: Σλ − 1.
        let last = dim - 1;
        rhs[last] = lambda.iter().sum::<f64>() - 1.0;
        for i in 0..ns {
            jac[(last, 2 * p + 1 + i)] = 1.0;
        }

        let size = rhs.amax();
        if !size.is_finite() {
            return None;
        }
        if size <= 1e-15 {
            converged = true;
            break;
        }
        let step = jac.lu().solve(&rhs)?;
        if !step.iter().all(|v| v.is_finite()) {
            return None;
        }
        for k in 0..p {
            dv[k] -= Complex::new(step[k], step[p + k]);
        }
        t -= step[2 * p];
        for i in 0..ns {
            lambda[i] -= step[2 * p + 1 + i];
        }
        if step.amax() <= 1e-15 * (1.0 + t.abs()) {
            converged = true;
            break;
        }
    }
    if !converged || lambda.iter().any(|&l| l < -1e-12) {
        return None;
    }

    let refined: Vec<Complex> = dv.iter().map(|x| x * scale).collect();
    let norm = (0..npts).map(|j| residual(&refined, j).norm()).fold(0.0, f64::max);
    let on_support = support
        .iter()
        .map(|&j| residual(&refined, j).norm())
        .fold(0.0, f64::max);
    // No off-support point may exceed the equioscillation level.
    if norm > on_support * (1.0 + 1e-13) || norm > start_norm * (1.0 + 1e-13) {
        return None;
    }
    let dual_bound = support
        .iter()
        .zip(&lambda)
        .map(|(&j, &l)| {
            let e = residual(&refined, j);
            l * (e.conj() / e.norm() * fixed[j]).re
        })
        .sum();
    Some(Refined { d: refined, dual_bound })
}
