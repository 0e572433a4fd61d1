//! Conformal maps and potential theory for `Ω_α`, the complement of the arc
//! `Γ_α = {e^{it} : |t| ≤ α}` in the extended plane.
//!
//! The exterior map `f(z) = ½(z − 1 + √((z − e^{iα})(z − e^{−iα})))` sends
//! `Ω_α` onto `{|w| > sin(α/2)}` with `f(z) = z + O(1)` at infinity. Its
//! inverse is the rational map `z = 2w(w + 1)/(2w + 1 − cos α)`, which is
//! what the boundary quadratures parametrize the arc with.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{Complex, ComplexPoint};
use crate::quadrature::{periodic_mean, QuadConfig};
use crate::weights::WeightSpec;

pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-12;
pub const DEFAULT_ANGLE_MARGIN: f64 = 1e-3;

/// Relative distance of a root from the image circle below which it is
/// treated as a (near-)singular point of the boundary integrand.
const NEAR_CIRCLE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArcDomain {
    alpha: f64,
    capacity: f64,
    exclusion_radius: f64,
}

impl ArcDomain {
    /// Arc with half-angle `alpha` in `[10⁻³, π − 10⁻³]`.
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_angle_margin(alpha, DEFAULT_ANGLE_MARGIN)
    }

    /// Arc with half-angle in `[margin, π − margin]`; the open interval
    /// `(0, π)` is enforced regardless of the margin.
    pub fn with_angle_margin(alpha: f64, margin: f64) -> Result<Self> {
        let (min, max) = (margin.max(0.0), PI - margin.max(0.0));
        if !(alpha > 0.0 && alpha < PI && alpha >= min && alpha <= max) {
            return Err(Error::InvalidAngle { alpha, min, max });
        }
        Ok(ArcDomain {
            alpha,
            capacity: (0.5 * alpha).sin(),
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
        })
    }

    pub fn with_exclusion_radius(mut self, radius: f64) -> Self {
        self.exclusion_radius = radius.max(0.0);
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    /// `(e^{iα}, e^{−iα})`
    pub fn endpoints(&self) -> (Complex, Complex) {
        let e = Complex::from_polar(1.0, self.alpha);
        (e, e.conj())
    }

    /// `2cos²(α/4)`, the limit of the unweighted Widom factors.
    pub fn alpha_constant(&self) -> f64 {
        2.0 * (0.25 * self.alpha).cos().powi(2)
    }

    pub fn distance_to_arc(&self, z: Complex) -> f64 {
        let theta = z.arg();
        if theta.abs() <= self.alpha {
            (z.norm() - 1.0).abs()
        } else {
            let (a, b) = self.endpoints();
            (z - a).norm().min((z - b).norm())
        }
    }

    fn check_off_arc(&self, z: Complex) -> Result<()> {
        let distance = self.distance_to_arc(z);
        if distance < self.exclusion_radius || (self.exclusion_radius == 0.0 && distance == 0.0 && self.on_open_arc(z))
        {
            return Err(Error::PointOnArc { distance });
        }
        Ok(())
    }

    // With a zero exclusion radius only the endpoints (where the map extends
    // continuously) may be evaluated.
    fn on_open_arc(&self, z: Complex) -> bool {
        let (a, b) = self.endpoints();
        z != a && z != b
    }

    /// Both preimages on the image circle of a point `x` of the arc, as angles φ
    /// with `inverse_exterior_map(cap·e^{iφ}) = x`.
    pub fn arc_preimages(&self, x: Complex) -> [f64; 2] {
        self.arc_preimage_angles(x.arg())
    }

    /// Preimages of `e^{iθ}`, `|θ| ≤ α`, in closed form:
    /// `w = e^{iθ/2}(i sin(θ/2) ± √(sin((α+θ)/2) sin((α−θ)/2)))`.
    fn arc_preimage_angles(&self, theta: f64) -> [f64; 2] {
        let theta = theta.clamp(-self.alpha, self.alpha);
        let h = (0.5 * theta).sin();
        let r = ((0.5 * (self.alpha + theta)).sin() * (0.5 * (self.alpha - theta)).sin())
            .max(0.0)
            .sqrt();
        [0.5 * theta + h.atan2(r), 0.5 * theta + h.atan2(-r)]
    }

    fn on_arc(&self, z: Complex) -> bool {
        (z.norm() - 1.0).abs() <= 4.0 * f64::EPSILON && z.arg().abs() <= self.alpha + 4.0 * f64::EPSILON
    }

    /// Roots of `2w² + (2 − 2u)w − u(1 − cos α) = 0`, i.e. the two solutions
    /// of `inverse_exterior_map(w) = u`.
    fn preimage_roots(&self, u: Complex) -> (Complex, Complex) {
        let c1 = 1.0 - self.alpha.cos();
        let a = 2.0;
        let b = 2.0 - 2.0 * u;
        let c = -u * c1;
        let disc = (b * b - 4.0 * a * c).sqrt();
        let q = if (b + disc).norm() >= (b - disc).norm() {
            -0.5 * (b + disc)
        } else {
            -0.5 * (b - disc)
        };
        if q == Complex::new(0.0, 0.0) {
            return (q, q);
        }
        (q / a, c / q)
    }
}

pub fn capacity_arc(domain: &ArcDomain) -> f64 {
    domain.capacity()
}

/// Larger-modulus root of `½(z − 1 ± √((z − e^{iα})(z − e^{−iα})))`.
///
/// The two roots multiply to `−z·sin²(α/2)` and exactly one of them lies in
/// `|w| > sin(α/2)` off the arc, so selecting by modulus is the branch that
/// behaves like `z` at infinity.
pub fn exterior_map(z: ComplexPoint, domain: &ArcDomain) -> Result<ComplexPoint> {
    let z = match z {
        ComplexPoint::Infinity => return Ok(ComplexPoint::Infinity),
        ComplexPoint::Finite(z) => z,
    };
    domain.check_off_arc(z)?;
    Ok(ComplexPoint::Finite(exterior_map_finite(z, domain.alpha)))
}

fn exterior_map_finite(z: Complex, alpha: f64) -> Complex {
    let q = z * z - 2.0 * alpha.cos() * z + 1.0;
    let s = q.sqrt();
    let zm1 = z - 1.0;
    let plus = zm1 + s;
    let minus = zm1 - s;
    if plus.norm() >= minus.norm() {
        0.5 * plus
    } else {
        0.5 * minus
    }
}

pub fn inverse_exterior_map(w: ComplexPoint, domain: &ArcDomain) -> Result<ComplexPoint> {
    let w = match w {
        ComplexPoint::Infinity => return Ok(ComplexPoint::Infinity),
        ComplexPoint::Finite(w) => w,
    };
    let radius = domain.capacity;
    if w.norm() < radius * (1.0 - 1e-12) {
        return Err(Error::OutsideImage {
            modulus: w.norm(),
            radius,
        });
    }
    Ok(ComplexPoint::Finite(inverse_map_finite(w, domain.alpha)))
}

fn inverse_map_finite(w: Complex, alpha: f64) -> Complex {
    2.0 * w * (w + 1.0) / (2.0 * w + 1.0 - alpha.cos())
}

/// Green's function of `Ω_α` with pole at infinity, `log(|f(z)|/sin(α/2))`.
pub fn green_inf(z: ComplexPoint, domain: &ArcDomain) -> Result<f64> {
    match exterior_map(z, domain)? {
        ComplexPoint::Infinity => Err(Error::InfinityPole),
        ComplexPoint::Finite(w) => Ok((w.norm() / domain.capacity).ln().max(0.0)),
    }
}

/// `c(r, α) = (|1 − r| + √(1 − 2r cos α + r²)) / (2r sin(α/2))`, which equals
/// `exp(g(1/r, ∞))`.
pub fn c_r_alpha(r: f64, domain: &ArcDomain) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r = {r} must be positive")));
    }
    let alpha = domain.alpha;
    let root = (1.0 - 2.0 * r * alpha.cos() + r * r).sqrt();
    Ok(((1.0 - r).abs() + root) / (2.0 * r * domain.capacity))
}

/// `λ(u) = ((u e^{iα} − 1)/(u − e^{iα}))^{1/4}` onto the sector `|arg λ| < π/4`.
///
/// The Möbius ratio sends `Γ_α` to `(−∞, 0]` and `Ω_α` to its complement, so
/// the principal fourth root is the continuous branch with `λ(∞) = e^{iα/4}`.
pub fn lambda_map(u: ComplexPoint, domain: &ArcDomain) -> Result<Complex> {
    let e = Complex::from_polar(1.0, domain.alpha);
    let ratio = match u {
        ComplexPoint::Infinity => e,
        ComplexPoint::Finite(u) => {
            domain.check_off_arc(u)?;
            (u * e - 1.0) / (u - e)
        }
    };
    Ok(ratio.sqrt().sqrt())
}

/// `k(u, u0) = 2λ λ̄₀ / (λ + λ̄₀)²` with `λ = λ(u)`, `λ₀ = λ(u0)`.
pub fn kernel_k(u: ComplexPoint, u0: ComplexPoint, domain: &ArcDomain) -> Result<Complex> {
    let l = lambda_map(u, domain)?;
    let l0 = lambda_map(u0, domain)?.conj();
    Ok(2.0 * l * l0 / ((l + l0) * (l + l0)))
}

/// `log w` along the image circle `|w| = sin(α/2)`, parametrized by angle.
///
/// Each power factor is factored through the preimages of its node so that
/// `log|x(φ) − u_j|` is evaluated without cancellation near the node:
/// `x(w) − u_j = 2(w − w₁)(w − w₂)/(2w + 1 − cos α)`.
pub(crate) struct CircleLogWeight<'a> {
    weight: &'a WeightSpec,
    radius: f64,
    c1: f64,
    alpha: f64,
    log_constant: f64,
    total_exponent: f64,
    roots: Vec<(f64, [(f64, f64); 2])>,
}

impl<'a> CircleLogWeight<'a> {
    pub(crate) fn new(weight: &'a WeightSpec, domain: &ArcDomain) -> Self {
        let mut roots = Vec::new();
        let mut total = 0.0;
        for p in weight.powers() {
            if p.exponent == 0.0 {
                continue;
            }
            let pair = if domain.on_arc(p.node) {
                let [a, b] = domain.arc_preimage_angles(p.node.arg());
                [(domain.capacity, a), (domain.capacity, b)]
            } else {
                let (a, b) = domain.preimage_roots(p.node);
                [(a.norm(), a.arg()), (b.norm(), b.arg())]
            };
            roots.push((p.exponent, pair));
            total += p.exponent;
        }
        CircleLogWeight {
            weight,
            radius: domain.capacity,
            c1: 1.0 - domain.alpha.cos(),
            alpha: domain.alpha,
            log_constant: weight.constant_factor().ln(),
            total_exponent: total,
            roots,
        }
    }

    /// Angles where the integrand is singular, nearly singular or has a kink.
    pub(crate) fn breakpoints(&self, domain: &ArcDomain) -> Vec<f64> {
        let mut out = Vec::new();
        for (_, pair) in &self.roots {
            for &(rho, psi) in pair {
                if ((rho / self.radius) - 1.0).abs() < NEAR_CIRCLE {
                    out.push(psi);
                }
            }
        }
        if let Some(table) = self.weight.base_table() {
            for &(theta, _) in table {
                if theta.abs() <= self.alpha {
                    out.extend(domain.arc_preimages(Complex::from_polar(1.0, theta)));
                }
            }
        }
        out
    }

    pub(crate) fn eval(&self, phi: f64) -> f64 {
        let s = self.radius;
        let w = Complex::from_polar(s, phi);
        let mut value = self.log_constant;
        if self.weight.base_table().is_some() {
            let x = inverse_map_finite(w, self.alpha);
            value += self.weight.base_at(x.arg()).ln();
        }
        if !self.roots.is_empty() {
            let log_d = (2.0 * w + self.c1).norm().ln();
            value += self.total_exponent * (std::f64::consts::LN_2 - log_d);
            for (exponent, pair) in &self.roots {
                let mut acc = 0.0;
                for &(rho, psi) in pair {
                    let half = (0.5 * (phi - psi)).sin();
                    let d2 = (s - rho) * (s - rho) + 4.0 * s * rho * half * half;
                    acc += 0.5 * d2.ln();
                }
                value += exponent * acc;
            }
        }
        value
    }
}

/// `∫ log w dμ_{Γ_α}`, the equilibrium-measure log-integral, computed as the
/// mean of `log w ∘ f⁻¹` over the image circle.
pub fn mu_log_integral(weight: &WeightSpec, domain: &ArcDomain) -> Result<f64> {
    mu_log_integral_with(weight, domain, &QuadConfig::default())
}

pub fn mu_log_integral_with(weight: &WeightSpec, domain: &ArcDomain, cfg: &QuadConfig) -> Result<f64> {
    harmonic_measure_log_integral_with(weight, ComplexPoint::Infinity, domain, cfg)
}

/// `∫ log w dω(u0, ·; Ω_α)` via the exterior-disk Poisson integral at
/// `ζ₀ = f(u0)/sin(α/2)`.
pub fn harmonic_measure_log_integral(weight: &WeightSpec, u0: ComplexPoint, domain: &ArcDomain) -> Result<f64> {
    harmonic_measure_log_integral_with(weight, u0, domain, &QuadConfig::default())
}

pub fn harmonic_measure_log_integral_with(
    weight: &WeightSpec,
    u0: ComplexPoint,
    domain: &ArcDomain,
    cfg: &QuadConfig,
) -> Result<f64> {
    let log_w = CircleLogWeight::new(weight, domain);
    let mut breaks = log_w.breakpoints(domain);
    match exterior_map(u0, domain)? {
        ComplexPoint::Infinity => {
            if log_w.roots.is_empty() && weight.base_table().is_none() {
                return Ok(log_w.log_constant);
            }
            periodic_mean(|phi| log_w.eval(phi), &breaks, cfg)
        }
        ComplexPoint::Finite(w0) => {
            let zeta = w0 / domain.capacity;
            let (rho, psi) = (zeta.norm().max(1.0), zeta.arg());
            if rho - 1.0 < NEAR_CIRCLE {
                breaks.push(psi);
            }
            let poisson = move |phi: f64| {
                let half = (0.5 * (phi - psi)).sin();
                let den = (rho - 1.0) * (rho - 1.0) + 4.0 * rho * half * half;
                (rho * rho - 1.0) / den
            };
            periodic_mean(|phi| log_w.eval(phi) * poisson(phi), &breaks, cfg)
        }
    }
}

/// `|F_w(u, ·)| = exp(−∫ log w dω(u))`; the phase is not computed.
pub fn outer_modulus(weight: &WeightSpec, u: ComplexPoint, domain: &ArcDomain) -> Result<f64> {
    Ok((-harmonic_measure_log_integral(weight, u, domain)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn half_pi() -> ArcDomain {
        ArcDomain::new(FRAC_PI_2).unwrap()
    }

    fn fin(p: ComplexPoint) -> Complex {
        p.finite().unwrap()
    }

    #[test]
    fn angle_limits() {
        assert!(ArcDomain::new(0.0).is_err());
        assert!(ArcDomain::new(PI).is_err());
        assert!(ArcDomain::new(1e-4).is_err());
        assert!(ArcDomain::with_angle_margin(1e-4, 0.0).is_ok());
        assert!(ArcDomain::with_angle_margin(PI, 0.0).is_err());
        let d = half_pi();
        let (a, b) = d.endpoints();
        assert!((a.norm() - 1.0).abs() < 1e-15 && (b.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity_arc(&half_pi()), FRAC_PI_4.sin());
        assert!((capacity_arc(&ArcDomain::new(FRAC_PI_3).unwrap()) - 0.5).abs() < 1e-15);
        let near_full = ArcDomain::with_angle_margin(PI - 1e-6, 0.0).unwrap();
        assert!((capacity_arc(&near_full) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exterior_map_examples() {
        let d = half_pi();
        let w0 = fin(exterior_map(ComplexPoint::real(0.0), &d).unwrap());
        assert!((w0 - Complex::new(-1.0, 0.0)).norm() < 1e-15);

        // Endpoint as a boundary limit, evaluated with the guard switched off.
        let open = d.with_exclusion_radius(0.0);
        let e = Complex::from_polar(1.0, FRAC_PI_2);
        let we = fin(exterior_map(e.into(), &open).unwrap());
        assert!((we - 0.5 * (e - 1.0)).norm() < 1e-15);
        assert!((we.norm() - FRAC_PI_4.sin()).abs() < 1e-15);

        let big = fin(exterior_map(ComplexPoint::real(1e6), &d).unwrap());
        assert!((big - 1e6).norm() < 2.0);
        assert_eq!(
            exterior_map(ComplexPoint::Infinity, &d).unwrap(),
            ComplexPoint::Infinity
        );
    }

    #[test]
    fn point_on_arc_is_rejected() {
        let d = half_pi();
        for t in [-1.0, 0.0, 0.3, FRAC_PI_2] {
            let z = Complex::from_polar(1.0, t);
            assert!(matches!(exterior_map(z.into(), &d), Err(Error::PointOnArc { .. })));
            assert!(matches!(lambda_map(z.into(), &d), Err(Error::PointOnArc { .. })));
        }
        // Just outside the exclusion radius is fine.
        assert!(exterior_map(ComplexPoint::real(1.0 + 1e-9), &d).is_ok());
    }

    #[test]
    fn inverse_map_examples() {
        let d = half_pi();
        let z = fin(inverse_exterior_map(ComplexPoint::real(-1.0), &d).unwrap());
        assert!(z.norm() < 1e-15);
        let z = fin(inverse_exterior_map(ComplexPoint::real(1e6), &d).unwrap());
        assert!(((z - 1e6) / 1e6).norm() < 1e-5);
        assert!(matches!(
            inverse_exterior_map(ComplexPoint::real(0.5), &d),
            Err(Error::OutsideImage { .. })
        ));
    }

    #[test]
    fn inverse_closed_form_matches_root_solver() {
        // Oracle: Newton on f(z) - w = 0 from a far-field start.
        let d = ArcDomain::new(1.1).unwrap();
        for (re, im) in [(2.0, 0.5), (-0.3, 1.2), (0.1, -0.9), (5.0, -5.0)] {
            let w = Complex::new(re, im);
            let mut z = w + 0.5;
            for _ in 0..200 {
                let f = exterior_map_finite(z, d.alpha) - w;
                let h = 1e-7 * (1.0 + z.norm());
                let df = (exterior_map_finite(z + h, d.alpha) - exterior_map_finite(z - h, d.alpha)) / (2.0 * h);
                let step = f / df;
                z -= step;
                if step.norm() < 1e-15 {
                    break;
                }
            }
            let closed = fin(inverse_exterior_map(w.into(), &d).unwrap());
            assert!((closed - z).norm() < 1e-9 * (1.0 + z.norm()), "{closed} vs {z}");
        }
    }

    #[test]
    fn green_examples() {
        let d = half_pi();
        let g = green_inf(ComplexPoint::real(0.5), &d).unwrap();
        let expected = ((1.0 + 5f64.sqrt()) / (4.0 * FRAC_PI_4.sin())).ln();
        assert!((g - expected).abs() < 1e-15);
        let open = d.with_exclusion_radius(0.0);
        assert_eq!(green_inf(d.endpoints().0.into(), &open).unwrap(), 0.0);
        let near = green_inf(ComplexPoint::real(1.0 + 1e-10), &d).unwrap();
        assert!((0.0..1e-4).contains(&near));
        let far = green_inf(ComplexPoint::real(1e6), &d).unwrap();
        assert!((far - (1e6f64.ln() - FRAC_PI_4.sin().ln())).abs() < 1e-5);
        assert!(matches!(
            green_inf(ComplexPoint::Infinity, &d),
            Err(Error::InfinityPole)
        ));
    }

    #[test]
    fn c_r_alpha_examples() {
        let d = half_pi();
        assert!((c_r_alpha(1.0, &d).unwrap() - 1.0).abs() < 1e-15);
        assert!((c_r_alpha(1e9, &d).unwrap() - 1.0 / FRAC_PI_4.sin()).abs() < 1e-8);
        let c2 = c_r_alpha(2.0, &d).unwrap();
        let via_green = green_inf(ComplexPoint::real(0.5), &d).unwrap().exp();
        assert!((c2 - via_green).abs() < 1e-12 * c2);
        assert!((c2 - 1.144122).abs() < 1e-6);
        assert!(c_r_alpha(0.0, &d).is_err());
    }

    #[test]
    fn lambda_examples() {
        let d = half_pi();
        let a = d.alpha();
        let inf = lambda_map(ComplexPoint::Infinity, &d).unwrap();
        assert!((inf - Complex::from_polar(1.0, a / 4.0)).norm() < 1e-15);
        let zero = lambda_map(ComplexPoint::real(0.0), &d).unwrap();
        assert!((zero - Complex::from_polar(1.0, -a / 4.0)).norm() < 1e-15);
        let two = lambda_map(ComplexPoint::real(2.0), &d).unwrap();
        assert!((two.norm() - 1.0).abs() < 1e-14);
        assert!((two.arg() - 3f64.atan2(-4.0) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn kernel_examples() {
        let d = half_pi();
        let a = d.alpha();
        let k = kernel_k(ComplexPoint::Infinity, ComplexPoint::Infinity, &d).unwrap();
        assert!(k.im.abs() < 1e-15);
        assert!((k.re - 1.0 / (2.0 * (a / 4.0).cos().powi(2))).abs() < 1e-15);
        // λ(−1) = 1 is real, so k = 1/2.
        let m1 = ComplexPoint::real(-1.0);
        let k = kernel_k(m1, m1, &d).unwrap();
        assert!((k - Complex::new(0.5, 0.0)).norm() < 1e-15);
        let two = ComplexPoint::real(2.0);
        let k = kernel_k(two, two, &d).unwrap();
        assert!(k.im.abs() < 1e-15);
        assert!((1.0 / k.re - 1.316_227_766).abs() < 1e-8);
    }

    #[test]
    fn log_weight_factorization_matches_direct_product() {
        let d = ArcDomain::new(2.0).unwrap();
        let w = WeightSpec::power(Complex::new(0.4, 0.3), 1.3)
            .with_power(Complex::from_polar(1.0, 0.5), 0.5)
            .with_power(Complex::new(-3.0, 0.0), -0.7)
            .scaled(1.7)
            .unwrap();
        let lw = CircleLogWeight::new(&w, &d);
        for k in 0..50 {
            let phi = 0.1 + k as f64 * 0.12;
            let x = inverse_map_finite(Complex::from_polar(d.capacity, phi), d.alpha);
            let direct = w.eval_unchecked(x).unwrap().ln();
            assert!((lw.eval(phi) - direct).abs() < 1e-11, "{phi}");
        }
    }

    #[test]
    fn mu_log_examples() {
        let d = half_pi();
        assert_eq!(mu_log_integral(&WeightSpec::unit(), &d).unwrap(), 0.0);
        let w = WeightSpec::power(Complex::new(0.5, 0.0), 1.0).scaled(2.0).unwrap();
        let v = mu_log_integral(&w, &d).unwrap();
        assert!((v - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-9);
        let w = WeightSpec::power(Complex::new(1.0, 0.0), 1.0);
        let v = mu_log_integral(&w, &d).unwrap();
        assert!((v - FRAC_PI_4.sin().ln()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_measure_examples() {
        let d = half_pi();
        let w = WeightSpec::power(Complex::new(0.3, 0.2), 0.8);
        let a = harmonic_measure_log_integral(&w, ComplexPoint::Infinity, &d).unwrap();
        let b = mu_log_integral(&w, &d).unwrap();
        assert_eq!(a, b);

        let endpoint = WeightSpec::power(d.endpoints().0, 1.0);
        let v = harmonic_measure_log_integral(&endpoint, ComplexPoint::real(0.0), &d).unwrap();
        assert!((v - FRAC_PI_4.sin().ln()).abs() < 1e-9, "{v}");

        let unit = harmonic_measure_log_integral(&WeightSpec::unit(), ComplexPoint::new(0.2, 0.1), &d).unwrap();
        assert!(unit.abs() < 1e-12);
    }

    #[test]
    fn outer_modulus_examples() {
        let d = half_pi();
        assert!((outer_modulus(&WeightSpec::unit(), ComplexPoint::real(3.0), &d).unwrap() - 1.0).abs() < 1e-12);
        let w = WeightSpec::power(Complex::new(0.5, 0.0), 1.0).scaled(2.0).unwrap();
        let f = outer_modulus(&w, ComplexPoint::Infinity, &d).unwrap();
        assert!((f - (-mu_log_integral(&w, &d).unwrap()).exp()).abs() < 1e-15);
        assert!((f - 0.618_033_988_749_895).abs() < 1e-9);
    }

    #[test]
    fn arc_preimages_map_back() {
        let d = ArcDomain::new(1.3).unwrap();
        for t in [-1.3, -0.7, 0.0, 0.4, 1.3] {
            let x = Complex::from_polar(1.0, t);
            for phi in d.arc_preimages(x) {
                let back = inverse_map_finite(Complex::from_polar(d.capacity, phi), d.alpha);
                assert!((back - x).norm() < 1e-14, "{t} {phi}");
            }
        }
    }
}
