//! Property checks shared by the property suite and the acceptance run.
//!
//! Each check takes a sampled case and returns `Err` with a description on
//! failure, so the same code can back a `proptest!` block and a summary line.

#![allow(dead_code)]

use std::f64::consts::PI;

use arcwidom::minimax::{build_grid, solve_minimax, GridStrategy, GridTarget, Normalization, SolverConfig};
use arcwidom::potential::{
    c_r_alpha, exterior_map, green_inf, harmonic_measure_log_integral, inverse_exterior_map, kernel_k, lambda_map,
    mu_log_integral,
};
use arcwidom::{ArcDomain, Complex, ComplexPoint, Grid, WeightSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

pub type Check = Result<(), String>;

fn fin(p: ComplexPoint) -> Complex {
    p.finite().expect("finite point")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `∫ log|rζ − 1| dμ` in closed form: `log((|1 − r| + √(1 − 2r cos α + r²))/2)`.
pub fn lemma_closed_form(r: f64, alpha: f64) -> f64 {
    (((1.0 - r).abs() + (1.0 - 2.0 * r * alpha.cos() + r * r).sqrt()) / 2.0).ln()
}

// Strategies.

pub fn alpha() -> impl Strategy<Value = f64> {
    0.05f64..3.09
}

/// Angle and image point `w = ρ·sin(α/2)·e^{iφ}` with `ρ > 1`.
pub fn exterior_image_point() -> impl Strategy<Value = (f64, f64, f64)> {
    (alpha(), 1.0 + 1e-6..50.0f64, -PI..PI)
}

/// Angle and a point of `Ω_α` at distance at least 1e-3 from the arc.
pub fn domain_point() -> impl Strategy<Value = (f64, f64, f64)> {
    (alpha(), -3.0f64..3.0, -3.0f64..3.0).prop_filter("off the arc", |&(a, x, y)| {
        let d = ArcDomain::new(a).unwrap();
        d.distance_to_arc(Complex::new(x, y)) > 1e-3
    })
}

/// Angle, arc node parameter in [−1, 1] (fraction of α), and a domain point.
pub fn frostman_case() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.2f64..2.9, -1.0f64..1.0, -3.0f64..3.0, -3.0f64..3.0).prop_filter("off the arc", |&(a, _, x, y)| {
        let d = ArcDomain::new(a).unwrap();
        d.distance_to_arc(Complex::new(x, y)) > 1e-2
    })
}

/// Angle, degree, and a conjugation-symmetric weight (a real node with an
/// exponent, plus a conjugate pair).
pub fn symmetric_solve_case() -> impl Strategy<Value = (f64, usize, f64, f64, f64, f64)> {
    (
        0.4f64..2.8,
        1usize..7,
        -2.5f64..2.5,
        0.0f64..1.5,
        0.2f64..1.5,
        0.0f64..1.0,
    )
}

// Checks.

pub fn round_trip(alpha: f64, rho: f64, phi: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let w = Complex::from_polar(rho * d.capacity(), phi);
    let z = inverse_exterior_map(ComplexPoint::Finite(w), &d).map_err(|e| e.to_string())?;
    let back = fin(exterior_map(z, &d).map_err(|e| e.to_string())?);
    let err = (back - w).norm();
    ensure(err <= 1e-10 * (1.0 + w.norm()), || {
        format!("α={alpha} w={w}: error {err:e}")
    })
}

pub fn boundary(alpha: f64, phi: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let s = d.capacity();
    let x =
        fin(inverse_exterior_map(ComplexPoint::Finite(Complex::from_polar(s, phi)), &d).map_err(|e| e.to_string())?);
    ensure((x.norm() - 1.0).abs() <= 1e-10, || format!("|x| = {}", x.norm()))?;
    ensure(x.arg().abs() <= alpha + 1e-10, || {
        format!("arg x = {} outside ±{alpha}", x.arg())
    })?;
    // The map itself rejects arc points; its boundary extension is the pair
    // of circle preimages, which must include one mapping back onto `x`.
    let back = d
        .arc_preimages(x)
        .iter()
        .map(|&psi| {
            let y = fin(inverse_exterior_map(ComplexPoint::Finite(Complex::from_polar(s, psi)), &d).unwrap());
            (y - x).norm()
        })
        .fold(f64::INFINITY, f64::min);
    ensure(back <= 1e-10, || {
        format!("α={alpha} φ={phi}: preimage round trip {back:e}")
    })
}

pub fn green_nonnegative(alpha: f64, x: f64, y: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let g = green_inf(ComplexPoint::new(x, y), &d).map_err(|e| e.to_string())?;
    ensure(g >= 0.0, || format!("g = {g}"))
}

/// `g(z) − log|z| + log sin(α/2)` is `O(1/|z|)` at infinity.
pub fn green_asymptotics(alpha: f64, phi: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    for radius in [1e3, 1e6] {
        let z = Complex::from_polar(radius, phi);
        let g = green_inf(ComplexPoint::Finite(z), &d).map_err(|e| e.to_string())?;
        let gap = (g - radius.ln() + d.capacity().ln()).abs();
        ensure(gap <= 2.0 / radius, || format!("|z|={radius}: gap {gap:e}"))?;
    }
    Ok(())
}

pub fn c_matches_green(alpha: f64, r: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let c = c_r_alpha(r, &d).map_err(|e| e.to_string())?;
    if r == 1.0 {
        // 1/r = 1 lies on the arc, where g vanishes.
        return ensure((c - 1.0).abs() <= 1e-12, || format!("c(1, α) = {c}"));
    }
    let g = green_inf(ComplexPoint::real(1.0 / r), &d).map_err(|e| e.to_string())?;
    let rel = (c - g.exp()).abs() / c;
    ensure(rel <= 1e-12, || {
        format!("α={alpha} r={r}: c={c} exp(g)={} rel {rel:e}", g.exp())
    })
}

pub fn poisson_mass(alpha: f64, x: f64, y: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let e = WeightSpec::constant(std::f64::consts::E).map_err(|e| e.to_string())?;
    let v = harmonic_measure_log_integral(&e, ComplexPoint::new(x, y), &d).map_err(|e| e.to_string())?;
    ensure((v - 1.0).abs() <= 1e-9, || format!("α={alpha} u0=({x},{y}): mass {v}"))
}

/// `mu_log_integral(|rζ − 1|)` against [`lemma_closed_form`].
pub fn lemma_point(r: f64, alpha: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let w = WeightSpec::power(Complex::new(1.0 / r, 0.0), 1.0)
        .scaled(r)
        .map_err(|e| e.to_string())?;
    let v = mu_log_integral(&w, &d).map_err(|e| e.to_string())?;
    let exact = lemma_closed_form(r, alpha);
    ensure((v - exact).abs() <= 1e-8, || format!("r={r} α={alpha}: {v} vs {exact}"))
}

/// `exp(∫ log|x − u_j| dω(u0)) = |u0 − u_j|·exp(−g(u0))` for `u_j` on the arc.
pub fn frostman(alpha: f64, t: f64, x: f64, y: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let node = Complex::from_polar(1.0, t * alpha);
    let u0 = Complex::new(x, y);
    let w = WeightSpec::power(node, 1.0);
    let lhs = harmonic_measure_log_integral(&w, ComplexPoint::Finite(u0), &d)
        .map_err(|e| e.to_string())?
        .exp();
    let g = green_inf(ComplexPoint::Finite(u0), &d).map_err(|e| e.to_string())?;
    let rhs = (u0 - node).norm() * (-g).exp();
    ensure((lhs - rhs).abs() <= 1e-8, || {
        format!("α={alpha} node={node} u0={u0}: {lhs} vs {rhs}")
    })
}

pub fn lambda_sector(alpha: f64, x: f64, y: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let u = ComplexPoint::new(x, y);
    let l = lambda_map(u, &d).map_err(|e| e.to_string())?;
    ensure(l.arg().abs() <= PI / 4.0 + 1e-12, || format!("arg λ = {}", l.arg()))?;
    let k = kernel_k(u, u, &d).map_err(|e| e.to_string())?;
    ensure(k.re > 0.0 && k.im.abs() <= 1e-12 * k.re, || format!("k(u,u) = {k}"))
}

/// Second differences of a smooth weight along the arc stay bounded.
pub fn weight_smoothness(alpha: f64, nx: f64, ny: f64, exponent: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let node = Complex::new(nx, ny);
    if d.distance_to_arc(node) < 0.5 {
        return Ok(());
    }
    let w = WeightSpec::power(node, exponent);
    let h = alpha / 200.0;
    let at = |t: f64| w.eval(Complex::from_polar(1.0, t), &d).unwrap();
    let mut worst: f64 = 0.0;
    for k in 1..399 {
        let t = -alpha + k as f64 * h;
        let second = (at(t + h) - 2.0 * at(t) + at(t - h)) / (h * h);
        worst = worst.max(second.abs());
    }
    // Distance ≥ 0.5 to the node and |exponent| ≤ 3 bound the second
    // derivative by a modest constant.
    ensure(worst.is_finite() && worst < 1e4, || {
        format!("second difference {worst}")
    })
}

fn symmetric_weight(node: f64, e0: f64, pair_re: f64, pair_im: f64, e1: f64) -> WeightSpec {
    WeightSpec::power(Complex::new(node, 0.0), e0)
        .with_power(Complex::new(pair_re, 1.0 + pair_im), e1)
        .with_power(Complex::new(pair_re, -1.0 - pair_im), e1)
}

fn arc_grid(alpha: f64, size: usize, weight: &WeightSpec) -> Result<Grid, String> {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    Grid::weighted(&d, size, GridStrategy::ChebyshevTheta, weight, false).map_err(|e| e.to_string())
}

/// Weights invariant under conjugation give real Chebyshev coefficients.
pub fn conjugation_symmetry(alpha: f64, n: usize, node: f64, e0: f64, pair_re: f64, pair_im: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    if d.distance_to_arc(Complex::new(node, 0.0)) < 0.05 {
        return Ok(());
    }
    let w = symmetric_weight(node, e0, pair_re, pair_im, 0.5);
    let grid = arc_grid(alpha, 256, &w)?;
    let sol = solve_minimax(&grid, n, Normalization::Monic, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let coeffs = sol.monomial_coefficients();
    let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let worst = coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    ensure(worst <= 1e-8 * scale, || {
        format!("α={alpha} n={n}: imaginary part {worst:e} (scale {scale})")
    })
}

/// Scaling the weight by `c` keeps the minimizer and scales the norm by `c`.
pub fn scale_invariance(alpha: f64, n: usize, node: f64, e0: f64, c: f64) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    if d.distance_to_arc(Complex::new(node, 0.3)) < 0.05 {
        return Ok(());
    }
    let w = WeightSpec::power(Complex::new(node, 0.3), e0);
    let cfg = SolverConfig::default();
    let base = solve_minimax(&arc_grid(alpha, 256, &w)?, n, Normalization::Monic, &cfg).map_err(|e| e.to_string())?;
    let scaled_w = w.clone().scaled(c).map_err(|e| e.to_string())?;
    let scaled =
        solve_minimax(&arc_grid(alpha, 256, &scaled_w)?, n, Normalization::Monic, &cfg).map_err(|e| e.to_string())?;
    let rel = (scaled.norm - c * base.norm).abs() / (c * base.norm);
    ensure(rel <= 1e-10, || format!("norm ratio off by {rel:e}"))?;
    let a = base.monomial_coefficients();
    let b = scaled.monomial_coefficients();
    let scale = a.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let diff = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    ensure(diff <= 1e-8 * scale, || {
        format!("α={alpha} n={n} c={c}: coefficients differ by {diff:e}")
    })
}

/// Refining a Chebyshev grid (size `N → 2N − 1` is nested) cannot lower the
/// minimax value.
pub fn nested_grid(alpha: f64, n: usize, size: usize) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let cfg = SolverConfig::default();
    let coarse = build_grid(&GridTarget::Arc(d), size, GridStrategy::ChebyshevTheta).map_err(|e| e.to_string())?;
    let fine =
        build_grid(&GridTarget::Arc(d), 2 * size - 1, GridStrategy::ChebyshevTheta).map_err(|e| e.to_string())?;
    let a = solve_minimax(&coarse, n, Normalization::Monic, &cfg).map_err(|e| e.to_string())?;
    let b = solve_minimax(&fine, n, Normalization::Monic, &cfg).map_err(|e| e.to_string())?;
    ensure(a.norm <= b.norm * (1.0 + 1e-10) + 1e-12, || {
        format!("α={alpha} n={n}: coarse {} > fine {}", a.norm, b.norm)
    })
}

/// Converged solves certify themselves, monic and point-normalized.
pub fn certified(alpha: f64, n: usize, u0: Option<(f64, f64)>) -> Check {
    let d = ArcDomain::new(alpha).map_err(|e| e.to_string())?;
    let normalization = match u0 {
        None => Normalization::Monic,
        Some((x, y)) => {
            let u = Complex::new(x, y);
            if d.distance_to_arc(u) < 0.1 {
                return Ok(());
            }
            Normalization::Point(u)
        }
    };
    let grid = build_grid(&GridTarget::Arc(d), 256, GridStrategy::ChebyshevTheta).map_err(|e| e.to_string())?;
    let sol = solve_minimax(&grid, n, normalization, &SolverConfig::default()).map_err(|e| e.to_string())?;
    ensure(sol.converged && sol.certificate <= 1e-6, || {
        format!("α={alpha} n={n} {normalization:?}: certificate {:e}", sol.certificate)
    })
}

/// Runs `check` on `cases` deterministic samples of `strategy`.
pub fn run<S, F>(strategy: S, cases: u32, check: F) -> Check
where
    S: Strategy,
    S::Value: Clone + std::fmt::Debug,
    F: Fn(S::Value) -> Check,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| match e {
            TestError::Fail(reason, value) => format!("{reason} (input {value:?})"),
            TestError::Abort(reason) => format!("aborted: {reason}"),
        })
}
