//! Quadrature on the circle for the boundary integrals in [`crate::potential`].
//!
//! Smooth periodic integrands use the trapezoidal rule with node doubling.
//! Integrands with known singular or non-smooth points are split there and
//! handled by globally adaptive 16-point Gauss–Legendre panels; bisection
//! toward a split point produces dyadically graded panels automatically.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Absolute tolerance on the mean value `(1/2π)∫ f`.
    pub tolerance: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Panel budget for the adaptive Gauss path.
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tolerance: 1e-11,
            min_nodes: 512,
            max_nodes: 65536,
            max_panels: 200_000,
        }
    }
}

const GAUSS_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_ORDER))
}

fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = gauss16();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        sum += wi * f(c + h * xi);
    }
    sum * h
}

/// Mean value of a smooth 2π-periodic function by the doubling trapezoidal
/// rule. Successive levels must agree to the configured tolerance.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: F, cfg: &QuadConfig) -> Result<f64> {
    let mut n = cfg.min_nodes.max(4);
    let mut sum: f64 = (0..n).map(|k| f(TAU * k as f64 / n as f64)).sum();
    let mut mean = sum / n as f64;
    loop {
        if 2 * n > cfg.max_nodes {
            return Err(Error::QuadratureFailure {
                tolerance: cfg.tolerance,
                estimate: mean,
                error: f64::NAN,
            });
        }
        let m = 2 * n;
        let odd: f64 = (0..n).map(|k| f(TAU * (2 * k + 1) as f64 / m as f64)).sum();
        sum += odd;
        let next = sum / m as f64;
        let err = (next - mean).abs();
        n = m;
        mean = next;
        if err < cfg.tolerance {
            return Ok(mean);
        }
        if !mean.is_finite() {
            return Err(Error::QuadratureFailure {
                tolerance: cfg.tolerance,
                estimate: mean,
                error: err,
            });
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Globally adaptive Gauss–Legendre integration of `f` over `[a, b]` split at
/// `cuts` (sorted, inside the interval). Returns the integral, not the mean.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cuts: &[f64],
    tolerance: f64,
    max_panels: usize,
) -> Result<f64> {
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts.iter().copied().filter(|&c| c > a && c < b));
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let make = |a: f64, b: f64, seq: &mut usize| {
        let m = 0.5 * (a + b);
        let coarse = gauss_panel(&f, a, b);
        let fine = gauss_panel(&f, a, m) + gauss_panel(&f, m, b);
        *seq += 1;
        Panel {
            a,
            b,
            value: fine,
            error: (fine - coarse).abs(),
            seq: *seq,
        }
    };

    // Start from panels no longer than π/8 so the Poisson kernel and nearby
    // singularities are resolved before the error estimate is trusted.
    let max_len = PI / 8.0;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let pieces = ((hi - lo) / max_len).ceil().max(1.0) as usize;
        for k in 0..pieces {
            let pa = lo + (hi - lo) * k as f64 / pieces as f64;
            let pb = if k + 1 == pieces {
                hi
            } else {
                lo + (hi - lo) * (k + 1) as f64 / pieces as f64
            };
            heap.push(make(pa, pb, &mut seq));
        }
    }

    let total_error = |heap: &BinaryHeap<Panel>| heap.iter().map(|p| p.error).sum::<f64>();
    let mut err = total_error(&heap);
    let mut panels = heap.len();
    while err > tolerance {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let m = 0.5 * (worst.a + worst.b);
        if panels >= max_panels || !(m > worst.a && m < worst.b) {
            heap.push(worst);
            let mut ordered: Vec<&Panel> = heap.iter().collect();
            ordered.sort_by(|x, y| x.a.total_cmp(&y.a));
            return Err(Error::QuadratureFailure {
                tolerance,
                estimate: ordered.iter().map(|p| p.value).sum(),
                error: err,
            });
        }
        let left = make(worst.a, m, &mut seq);
        let right = make(m, worst.b, &mut seq);
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
        // Periodically resum to keep the running error free of drift.
        if panels % 1024 == 0 {
            err = total_error(&heap);
        }
    }
    // Fixed summation order (by position) keeps the result deterministic.
    let mut ordered: Vec<Panel> = heap.into_vec();
    ordered.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = ordered.iter().map(|p| p.value).sum();
    if !value.is_finite() {
        return Err(Error::QuadratureFailure {
            tolerance,
            estimate: value,
            error: f64::INFINITY,
        });
    }
    Ok(value)
}

/// Mean value `(1/2π)∫₀^{2π} f` of a periodic function whose non-smooth
/// points (in radians, any representative) are listed in `breakpoints`.
pub fn periodic_mean<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], cfg: &QuadConfig) -> Result<f64> {
    if breakpoints.is_empty() {
        return periodic_trapezoid(f, cfg);
    }
    let mut cuts: Vec<f64> = breakpoints.iter().map(|&b| b.rem_euclid(TAU)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    let start = cuts[0];
    let inner: Vec<f64> = cuts[1..].to_vec();
    let integral = adaptive_gauss(f, start, start + TAU, &inner, cfg.tolerance * TAU, cfg.max_panels)?;
    Ok(integral / TAU)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // ∫ x^30 = 2/31 is exact for a 16-point rule.
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_on_smooth_periodic() {
        // (1/2π)∫ exp(cos φ) = I0(1)
        let v = periodic_trapezoid(|p| p.cos().exp(), &QuadConfig::default()).unwrap();
        assert!((v - 1.266_065_877_752_008_4).abs() < 1e-13);
    }

    #[test]
    fn log_singularity_with_breakpoint() {
        // (1/2π)∫ log|2 sin(φ/2)| dφ = 0
        let f = |p: f64| (2.0 * (0.5 * p).sin()).abs().ln();
        let v = periodic_mean(f, &[0.0], &QuadConfig::default()).unwrap();
        assert!(v.abs() < 1e-9, "{v}");
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let cfg = QuadConfig {
            max_panels: 40,
            ..QuadConfig::default()
        };
        let f = |p: f64| 1.0 / (p - 1.0).abs().sqrt();
        assert!(matches!(
            periodic_mean(f, &[1.0], &cfg),
            Err(Error::QuadratureFailure { .. })
        ));
    }
}
