use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::Serialize;

use super::{Grid, Normalization};
use crate::error::{Error, Result};
use crate::point::Complex;

pub const ORACLE_MAX_DEGREE: usize = 3;
pub const ORACLE_MAX_POINTS: usize = 256;
/// Number of supporting half-planes replacing each modulus constraint.
pub const ORACLE_DIRECTIONS: usize = 128;

/// Enclosure of the grid minimax value from a polygonal LP relaxation.
#[derive(Clone, Debug, Serialize)]
pub struct OracleBracket {
    /// LP optimum; no admissible polynomial does better on the grid.
    pub lower: f64,
    /// Grid norm of the LP minimizer.
    pub upper: f64,
    /// Monomial coefficients of the LP minimizer, constant term first.
    pub coefficients: Vec<Complex>,
}

impl OracleBracket {
    pub fn contains(&self, value: f64, tolerance: f64) -> bool {
        value >= self.lower - tolerance && value <= self.upper + tolerance
    }
}

/// Solves the weighted minimax problem in the monomial basis by linear
/// programming, replacing `|z| ≤ t` with `Re(e^{iφ_k} z) ≤ t` for
/// `φ_k = 2πk/K`.
pub fn brute_oracle_minimax(grid: &Grid, degree: usize, normalization: Normalization) -> Result<OracleBracket> {
    if degree > ORACLE_MAX_DEGREE || grid.len() > ORACLE_MAX_POINTS {
        return Err(Error::InvalidParameter(format!(
            "oracle handles degree ≤ {ORACLE_MAX_DEGREE} on at most {ORACLE_MAX_POINTS} points"
        )));
    }
    // P = F + Σ_m a_m B_m with the normalization built into F and B_m.
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let (fixed, free): (Vec<Complex>, Vec<Vec<Complex>>) = match normalization {
        Normalization::Monic => {
            let mut f = vec![zero; degree + 1];
            f[degree] = one;
            let free = (0..degree)
                .map(|m| {
                    let mut b = vec![zero; degree + 1];
                    b[m] = one;
                    b
                })
                .collect();
            (f, free)
        }
        Normalization::Point(u0) => {
            let mut f = vec![zero; degree + 1];
            f[0] = one;
            let free = (1..=degree)
                .map(|m| {
                    let mut b = vec![zero; degree + 1];
                    b[m] = one;
                    b[0] = -u0.powu(m as u32);
                    b
                })
                .collect();
            (f, free)
        }
    };
    let horner = |c: &[Complex], z: Complex| c.iter().rev().fold(zero, |acc, a| acc * z + a);

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    let vars: Vec<_> = free
        .iter()
        .map(|_| {
            (
                lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)),
                lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)),
            )
        })
        .collect();
    for (&x, &w) in grid.points().iter().zip(grid.weight_values()) {
        if w <= 0.0 {
            continue;
        }
        let f = horner(&fixed, x) * w;
        let b: Vec<Complex> = free.iter().map(|c| horner(c, x) * w).collect();
        for k in 0..ORACLE_DIRECTIONS {
            let rot = Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / ORACLE_DIRECTIONS as f64);
            let mut row = Vec::with_capacity(2 * b.len() + 1);
            row.push((t, -1.0));
            for (bm, &(ar, ai)) in b.iter().zip(&vars) {
                let c = rot * bm;
                row.push((ar, c.re));
                row.push((ai, -c.im));
            }
            lp.add_constraint(&row, ComparisonOp::Le, -(rot * f).re);
        }
    }
    let solution = lp
        .solve()
        .map_err(|e| Error::LpFailure(e.to_string()))?
        .into_solution()
        .map_err(|_| Error::LpFailure("solve interrupted".into()))?;
    let mut coefficients = fixed.clone();
    for (bm, &(ar, ai)) in free.iter().zip(&vars) {
        let a = Complex::new(solution[ar], solution[ai]);
        for (c, b) in coefficients.iter_mut().zip(bm) {
            *c += a * b;
        }
    }
    let upper = grid
        .points()
        .iter()
        .zip(grid.weight_values())
        .map(|(&x, &w)| w * horner(&coefficients, x).norm())
        .fold(0.0, f64::max);
    Ok(OracleBracket {
        lower: solution.objective(),
        upper,
        coefficients,
    })
}
