//! Chebyshev polynomials on lemniscatic arcs `E = {z : z^m + 1 ∈ rΓ_α}`.
//!
//! The grid-optimal monic `T_{nm+l}` on `E` is `z^l r^n T_n((z^m + 1)/r)`,
//! where `T_n` is the Chebyshev polynomial on `Γ_α` for the weight
//! `|rζ − 1|^{l/m}`, so that `‖T_{nm+l}‖_E = r^n ‖w T_n‖_{Γ_α}`.

use serde::{Deserialize, Serialize};

use crate::asymptotics::predict_lemniscate_limit;
use crate::error::{Error, Result};
use crate::minimax::{
    build_grid, solve_minimax, Grid, GridStrategy, GridTarget, Normalization, PolySolution, SolverConfig,
};
use crate::point::Complex;
use crate::potential::ArcDomain;
use crate::weights::{lemniscate_reduced_weight, WeightSpec};

/// Distance of `1/r` from the arc below which the reduced weight is flagged
/// as nearly singular.
const NEAR_SINGULAR_DISTANCE: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemniscateSpec {
    pub m: u32,
    pub r: f64,
    pub alpha: f64,
    pub l: u32,
}

impl LemniscateSpec {
    pub fn new(m: u32, r: f64, alpha: f64, l: u32) -> Result<Self> {
        if m == 0 || l >= m {
            return Err(Error::InvalidParameter(format!("need 0 <= l < m, got l={l}, m={m}")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("r = {r} must be positive")));
        }
        ArcDomain::new(alpha)?;
        Ok(LemniscateSpec { m, r, alpha, l })
    }

    pub fn domain(&self) -> Result<ArcDomain> {
        ArcDomain::new(self.alpha)
    }

    /// `Cap(E) = (r sin(α/2))^{1/m}`
    pub fn capacity(&self) -> f64 {
        (self.r * (0.5 * self.alpha).sin()).powf(1.0 / self.m as f64)
    }

    /// Degree `nm + l` of the polynomial on `E` built from a degree-`n` one.
    pub fn degree(&self, n: usize) -> usize {
        n * self.m as usize + self.l as usize
    }

    pub fn reduced_weight(&self) -> Result<WeightSpec> {
        lemniscate_reduced_weight(self.m, self.r, self.l)
    }

    /// Whether the zero `1/r` of the reduced weight lies on or next to the arc.
    pub fn near_singular(&self) -> bool {
        if self.l == 0 {
            return false;
        }
        ArcDomain::new(self.alpha)
            .map(|d| d.distance_to_arc(Complex::new(1.0 / self.r, 0.0)) < NEAR_SINGULAR_DISTANCE)
            .unwrap_or(false)
    }
}

pub fn capacity_lemniscate(spec: &LemniscateSpec) -> f64 {
    spec.capacity()
}

/// A weighted arc solution lifted to `E`.
#[derive(Clone, Debug)]
pub struct LemniscatePoly {
    pub spec: LemniscateSpec,
    /// Weighted Chebyshev polynomial `T_n` on the arc.
    pub reduced: PolySolution,
    /// `r^n ‖w T_n‖`
    pub norm: f64,
}

impl LemniscatePoly {
    pub fn degree(&self) -> usize {
        self.spec.degree(self.reduced.degree)
    }

    /// `z^l r^n T_n((z^m + 1)/r)`
    pub fn eval(&self, z: Complex) -> Complex {
        let n = self.reduced.degree as i32;
        let zeta = (z.powu(self.spec.m) + 1.0) / self.spec.r;
        z.powu(self.spec.l) * self.spec.r.powi(n) * self.reduced.eval(zeta)
    }

    pub fn widom_factor(&self) -> f64 {
        self.norm / self.spec.capacity().powi(self.degree() as i32)
    }
}

/// Weighted arc grid whose angles match `build_grid` on `E` with the same
/// size and strategy.
pub fn reduced_grid(spec: &LemniscateSpec, size: usize, strategy: GridStrategy) -> Result<Grid> {
    let domain = spec.domain()?;
    Grid::weighted(&domain, size, strategy, &spec.reduced_weight()?, false)
}

/// Solves the reduced weighted problem of degree `n` and lifts it to `E`.
pub fn reduce(
    spec: &LemniscateSpec,
    n: usize,
    size: usize,
    strategy: GridStrategy,
    cfg: &SolverConfig,
) -> Result<LemniscatePoly> {
    let grid = reduced_grid(spec, size, strategy)?;
    let reduced = solve_minimax(&grid, n, Normalization::Monic, cfg)?;
    let norm = spec.r.powi(n as i32) * reduced.norm;
    Ok(LemniscatePoly {
        spec: *spec,
        reduced,
        norm,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRecord {
    pub m: u32,
    pub r: f64,
    pub alpha: f64,
    pub l: u32,
    pub n: usize,
    pub degree: usize,
    pub direct_norm: f64,
    pub reduced_norm: f64,
    /// `r^n`
    pub scale: f64,
    /// `|direct − scale·reduced| / direct`
    pub gap: f64,
    pub widom_direct: f64,
    pub widom_reduced: f64,
    pub widom_predicted: f64,
    pub near_singular: bool,
}

/// Solves the degree-`nm + l` problem directly on a grid of `E` and through
/// the reduction on the matching arc grid.
pub fn direct_vs_reduced(
    spec: &LemniscateSpec,
    n: usize,
    size: usize,
    strategy: GridStrategy,
    cfg: &SolverConfig,
) -> Result<ComparisonRecord> {
    let degree = spec.degree(n);
    let direct_grid = build_grid(&GridTarget::Lemniscate(*spec), size, strategy)?;
    let direct = solve_minimax(&direct_grid, degree, Normalization::Monic, cfg)?;
    let lifted = reduce(spec, n, size, strategy, cfg)?;
    let scale = spec.r.powi(n as i32);
    let cap = spec.capacity().powi(degree as i32);
    Ok(ComparisonRecord {
        m: spec.m,
        r: spec.r,
        alpha: spec.alpha,
        l: spec.l,
        n,
        degree,
        direct_norm: direct.norm,
        reduced_norm: lifted.reduced.norm,
        scale,
        gap: (direct.norm - lifted.norm).abs() / direct.norm,
        widom_direct: direct.norm / cap,
        widom_reduced: lifted.norm / cap,
        widom_predicted: predict_lemniscate_limit(spec)?.value,
        near_singular: spec.near_singular(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn validation() {
        assert!(LemniscateSpec::new(2, 1.0, FRAC_PI_2, 2).is_err());
        assert!(LemniscateSpec::new(0, 1.0, FRAC_PI_2, 0).is_err());
        assert!(LemniscateSpec::new(2, -1.0, FRAC_PI_2, 0).is_err());
        assert!(LemniscateSpec::new(2, 1.0, 4.0, 0).is_err());
    }

    #[test]
    fn capacity_example() {
        let spec = LemniscateSpec::new(2, 2.0, FRAC_PI_2, 1).unwrap();
        assert!((spec.capacity() - 2f64.sqrt().sqrt()).abs() < 1e-15);
        assert!(LemniscateSpec::new(2, 1.0, FRAC_PI_2, 1).unwrap().near_singular());
        assert!(!spec.near_singular());
    }

    #[test]
    fn lifted_polynomial_has_the_reduced_norm() {
        let spec = LemniscateSpec::new(3, 1.5, 1.0, 2).unwrap();
        let lifted = reduce(&spec, 3, 257, GridStrategy::ChebyshevTheta, &SolverConfig::default()).unwrap();
        let grid = build_grid(&GridTarget::Lemniscate(spec), 257, GridStrategy::ChebyshevTheta).unwrap();
        let direct = grid.points().iter().map(|&z| lifted.eval(z).norm()).fold(0.0, f64::max);
        assert!((direct - lifted.norm).abs() < 1e-10 * lifted.norm);
        assert_eq!(lifted.degree(), 11);
    }
}
