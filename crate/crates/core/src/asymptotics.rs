//! Closed-form limits of Widom factors and residual polynomials, and
//! Richardson extrapolation of computed sequences.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lemniscate::LemniscateSpec;
use crate::point::ComplexPoint;
use crate::potential::{
    c_r_alpha, green_inf, harmonic_measure_log_integral, kernel_k, lambda_map, mu_log_integral, outer_modulus,
    ArcDomain,
};
use crate::weights::WeightSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    WidomLimit,
    PointwiseLimit,
    LemniscateLimit,
    ResidualModulusProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileSample {
    pub u: ComplexPoint,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictionReport {
    pub kind: PredictionKind,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<f64>,
    pub components: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<ProfileSample>>,
}

impl PredictionReport {
    fn new(kind: PredictionKind, value: f64) -> Self {
        PredictionReport {
            kind,
            value,
            lower_bound: None,
            upper_bound: None,
            components: BTreeMap::new(),
            profile: None,
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.components.insert(key.to_string(), value);
        self
    }
}

/// `(exp I, 2 exp I)` with `I = ∫ log w dμ`: the Szegő-type lower bound and
/// Widom-type upper bound for `‖w T_n‖ / Cap^n`.
pub fn szego_widom_bounds(weight: &WeightSpec, domain: &ArcDomain) -> Result<(f64, f64)> {
    let e = mu_log_integral(weight, domain)?.exp();
    Ok((e, 2.0 * e))
}

/// `lim ‖w T_n‖ / Cap^n = 2cos²(α/4) exp(∫ log w dμ)`.
pub fn predict_widom_limit(weight: &WeightSpec, domain: &ArcDomain) -> Result<PredictionReport> {
    let log_integral = mu_log_integral(weight, domain)?;
    let e = log_integral.exp();
    let mut report = PredictionReport::new(PredictionKind::WidomLimit, domain.alpha_constant() * e)
        .with("capacity", domain.capacity())
        .with("alpha_constant", domain.alpha_constant())
        .with("log_integral", log_integral);
    report.lower_bound = Some(e);
    report.upper_bound = Some(2.0 * e);
    Ok(report)
}

/// `lim e^{n g(u0)} ‖w T_n(·, u0)‖ = exp(∫ log w dω(u0)) / k(u0, u0)`.
/// For `u0 = ∞` this is the Widom-factor limit.
pub fn predict_pointwise_limit(weight: &WeightSpec, u0: ComplexPoint, domain: &ArcDomain) -> Result<PredictionReport> {
    if u0.is_infinite() {
        let mut report = predict_widom_limit(weight, domain)?;
        report.kind = PredictionKind::PointwiseLimit;
        return Ok(report.with("kernel", 1.0 / domain.alpha_constant()));
    }
    let log_integral = harmonic_measure_log_integral(weight, u0, domain)?;
    let kernel = kernel_k(u0, u0, domain)?.re;
    let green = green_inf(u0, domain)?;
    Ok(
        PredictionReport::new(PredictionKind::PointwiseLimit, log_integral.exp() / kernel)
            .with("capacity", domain.capacity())
            .with("kernel", kernel)
            .with("log_integral", log_integral)
            .with("green", green),
    )
}

/// `lim 𝒲_{nm+l}(E) = 2cos²(α/4) c(r, α)^{l/m}`, with bounds
/// `c^{l/m} ≤ 𝒲 ≤ 2c^{l/m}`.
pub fn predict_lemniscate_limit(spec: &LemniscateSpec) -> Result<PredictionReport> {
    let domain = spec.domain()?;
    let c = c_r_alpha(spec.r, &domain)?;
    let factor = c.powf(spec.l as f64 / spec.m as f64);
    let mut report = PredictionReport::new(PredictionKind::LemniscateLimit, domain.alpha_constant() * factor)
        .with("capacity", spec.capacity())
        .with("alpha_constant", domain.alpha_constant())
        .with("c_factor", c);
    report.lower_bound = Some(factor);
    report.upper_bound = Some(2.0 * factor);
    Ok(report)
}

/// Limit of `e^{−n g(u)} |R_n(u, u0)|` at `u ∈ Ω_α`:
/// `½ |λ² + λ₀²|² / |λ² + |λ₀|²|² · |F_w(u)|`, with `λ = λ(u)`, `λ₀ = λ(u0)`.
pub fn limit_residual_modulus(
    weight: &WeightSpec,
    u: ComplexPoint,
    u0: ComplexPoint,
    domain: &ArcDomain,
) -> Result<f64> {
    let l2 = lambda_map(u, domain)?.powi(2);
    let l02 = lambda_map(u0, domain)?.powi(2);
    let rho2 = l02.norm();
    let ratio = (l2 + l02).norm() / (l2 + rho2).norm();
    Ok(0.5 * ratio * ratio * outer_modulus(weight, u, domain)?)
}

/// [`limit_residual_modulus`] sampled at several points.
pub fn residual_modulus_profile(
    weight: &WeightSpec,
    u0: ComplexPoint,
    points: &[ComplexPoint],
    domain: &ArcDomain,
) -> Result<PredictionReport> {
    let profile = points
        .iter()
        .map(|&u| {
            Ok(ProfileSample {
                u,
                value: limit_residual_modulus(weight, u, u0, domain)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let at_u0 = limit_residual_modulus(weight, u0, u0, domain)?;
    let mut report = PredictionReport::new(PredictionKind::ResidualModulusProfile, at_u0)
        .with("capacity", domain.capacity())
        .with("kernel", kernel_k(u0, u0, domain)?.re);
    report.profile = Some(profile);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    /// Largest absolute deviation of the fitted model from the data.
    pub residual: f64,
    /// Number of model terms (2: `L + a/n`, 3: `L + a/n + b/n²`).
    pub terms: usize,
}

/// Least-squares fit of `L + a/n (+ b/n²)` to `(n, value)` pairs; the
/// quadratic term is used from five points on.
pub fn richardson_extrapolate(ns: &[usize], values: &[f64]) -> Result<Extrapolation> {
    if ns.len() != values.len() {
        return Err(Error::InvalidParameter("n and value lists differ in length".into()));
    }
    if ns.len() < 3 {
        return Err(Error::IllConditionedFit(format!(
            "{} points, need at least 3",
            ns.len()
        )));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] == 0 {
        return Err(Error::IllConditionedFit(
            "degrees must be positive and strictly increasing".into(),
        ));
    }
    let (first, last) = (ns[0] as f64, ns[ns.len() - 1] as f64);
    if last / first < 1.25 {
        return Err(Error::IllConditionedFit(format!(
            "degree range {first}..{last} too narrow"
        )));
    }
    let terms = if ns.len() >= 5 { 3 } else { 2 };
    let a = DMatrix::from_fn(ns.len(), terms, |i, j| (ns[i] as f64).powi(-(j as i32)));
    let b = DVector::from_column_slice(values);
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-12 * smax) {
        return Err(Error::IllConditionedFit(format!(
            "condition number {:.3e}",
            smax / smin
        )));
    }
    let x = svd
        .solve(&b, 1e-14 * smax)
        .map_err(|e| Error::IllConditionedFit(e.to_string()))?;
    let residual = (&a * &x - b).amax();
    Ok(Extrapolation {
        limit: x[0],
        residual,
        terms,
    })
}
