use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus};

use super::{constraint_frame, PolySolution};
use crate::error::{Error, Result};
use crate::minimax::Grid;
use crate::point::Complex;

/// Largest first-order decrease of `max_E w|P| / ‖wP‖` over admissible
/// perturbations in a unit box, where `E` is the set of points with
/// `w|P| ≥ (1 − δ)‖wP‖` and each perturbation direction is scaled to have
/// maximum 1 on `E`. Zero at a grid-optimal polynomial (Kolmogorov
/// criterion), positive otherwise.
pub fn optimality_certificate(sol: &PolySolution, grid: &Grid, delta: f64) -> Result<f64> {
    if sol.degree == 0 {
        return Ok(0.0);
    }
    let values: Vec<(usize, Complex, f64)> = grid
        .points()
        .iter()
        .zip(grid.weight_values())
        .enumerate()
        .filter(|(_, (_, &w))| w > 0.0)
        .map(|(j, (&z, &w))| (j, sol.eval(z), w))
        .collect();
    let norm = values.iter().map(|(_, p, w)| w * p.norm()).fold(0.0, f64::max);
    if !(norm > 0.0) {
        return Err(Error::EmptyExtremalSet);
    }
    let cut = (1.0 - delta) * norm;
    let (_, null) = constraint_frame(&sol.basis, sol.degree, sol.normalization);

    let extremal: Vec<(usize, Complex, f64)> = values.into_iter().filter(|(_, p, w)| w * p.norm() >= cut).collect();
    // Perturbation directions on the extremal set, each scaled to unit maximum
    // so that the LP coefficients are O(1).
    let columns: Vec<Vec<Complex>> = {
        let q: Vec<Vec<Complex>> = extremal
            .iter()
            .map(|&(j, _, _)| sol.basis.eval(grid.points()[j]))
            .collect();
        null.iter()
            .map(|col| {
                let mut v: Vec<Complex> = q
                    .iter()
                    .zip(&extremal)
                    .map(|(qj, &(_, _, w))| w * col.iter().zip(qj).map(|(c, q)| c * q).sum::<Complex>())
                    .collect();
                let top = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
                if top > 0.0 {
                    v.iter_mut().for_each(|x| *x /= top);
                }
                v
            })
            .collect()
    };

    // maximize ε subject to ε + Re(u_i·Σ d_k B_ik) ≤ 0 on E, ε ≥ 0, |Re d|, |Im d| ≤ 1.
    // Variables: x = (ε, Re d_1, Im d_1, …), all constraints as A x + s = b, s ≥ 0.
    let p = null.len();
    let nvar = 1 + 2 * p;
    let (mut rows, mut cols, mut vals) = (Vec::new(), Vec::new(), Vec::new());
    let mut b = Vec::new();
    for (i, &(_, v, w)) in extremal.iter().enumerate() {
        let unit = (v * w).conj() / (w * v.norm());
        let r = b.len();
        rows.push(r);
        cols.push(0);
        vals.push(1.0);
        for (k, col) in columns.iter().enumerate() {
            let a = unit * col[i];
            rows.extend([r, r]);
            cols.extend([1 + 2 * k, 2 + 2 * k]);
            vals.extend([a.re, -a.im]);
        }
        b.push(0.0);
    }
    rows.push(b.len());
    cols.push(0);
    vals.push(-1.0);
    b.push(0.0);
    for j in 1..nvar {
        for sign in [1.0, -1.0] {
            rows.push(b.len());
            cols.push(j);
            vals.push(sign);
            b.push(1.0);
        }
    }
    let m = b.len();
    let a = CscMatrix::new_from_triplets(m, nvar, rows, cols, vals);
    let zero = CscMatrix::zeros((nvar, nvar));
    let mut q = vec![0.0; nvar];
    q[0] = -1.0;
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .build()
        .map_err(|e| Error::LpFailure(format!("{e:?}")))?;
    let mut solver = DefaultSolver::new(&zero, &q, &a, &b, &[NonnegativeConeT(m)], settings)
        .map_err(|e| Error::LpFailure(format!("{e:?}")))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => Ok(solver.solution.x[0].max(0.0)),
        status => Err(Error::LpFailure(format!("{status:?}"))),
    }
}
