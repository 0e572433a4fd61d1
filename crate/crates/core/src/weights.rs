//! Product-form weights on the arc:
//! `w(u) = constant · base(arg u) · ∏ |u − u_j|^{s_j}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Complex;
use crate::potential::ArcDomain;

/// Tolerance for "on the unit circle" checks of evaluation points.
const CIRCLE_TOL: f64 = 1e-10;
/// Distance below which a node counts as lying on the arc.
const NODE_ON_ARC_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFactor {
    pub node: Complex,
    pub exponent: f64,
}

/// A weight function on `Γ_α`.
///
/// The optional base table holds `(θ, value)` pairs, strictly increasing in
/// θ, interpolated piecewise linearly and bounded in `[1/M, M]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    constant: f64,
    powers: Vec<PowerFactor>,
    base_table: Option<Vec<(f64, f64)>>,
    base_bound: f64,
}

impl Default for WeightSpec {
    fn default() -> Self {
        Self::unit()
    }
}

impl WeightSpec {
    pub fn unit() -> Self {
        WeightSpec {
            constant: 1.0,
            powers: Vec::new(),
            base_table: None,
            base_bound: 1.0,
        }
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::unit().scaled(c)
    }

    /// `|u − node|^exponent`
    pub fn power(node: Complex, exponent: f64) -> Self {
        Self::unit().with_power(node, exponent)
    }

    pub fn with_power(mut self, node: Complex, exponent: f64) -> Self {
        self.powers.push(PowerFactor { node, exponent });
        self
    }

    pub fn with_table(mut self, table: Vec<(f64, f64)>, bound: f64) -> Result<Self> {
        if !(bound >= 1.0) {
            return Err(Error::InvalidWeight(format!("bound M = {bound} must be >= 1")));
        }
        if table.len() < 2 {
            return Err(Error::InvalidWeight("table needs at least two entries".into()));
        }
        for w in table.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidWeight("table thetas must be strictly increasing".into()));
            }
        }
        for &(theta, v) in &table {
            if !theta.is_finite() || !(v >= 1.0 / bound && v <= bound) {
                return Err(Error::InvalidWeight(format!(
                    "table value {v} at theta {theta} outside [1/M, M]"
                )));
            }
        }
        self.base_table = Some(table);
        self.base_bound = bound;
        Ok(self)
    }

    /// Multiplies the constant factor by `c > 0`.
    pub fn scaled(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidWeight(format!("constant {c} must be positive")));
        }
        self.constant *= c;
        Ok(self)
    }

    pub fn constant_factor(&self) -> f64 {
        self.constant
    }

    pub fn powers(&self) -> &[PowerFactor] {
        &self.powers
    }

    pub fn base_table(&self) -> Option<&[(f64, f64)]> {
        self.base_table.as_deref()
    }

    pub fn base_bound(&self) -> f64 {
        self.base_bound
    }

    pub fn is_unit(&self) -> bool {
        self.constant == 1.0 && self.powers.is_empty() && self.base_table.is_none()
    }

    /// Indices of power factors with negative exponent whose node lies on the arc.
    pub fn singular_on_arc(&self, domain: &ArcDomain) -> Vec<usize> {
        self.powers
            .iter()
            .enumerate()
            .filter(|(_, p)| p.exponent < 0.0 && domain.distance_to_arc(p.node) < NODE_ON_ARC_TOL)
            .map(|(i, _)| i)
            .collect()
    }

    /// Checks the weight against an arc: table coverage of `[-α, α]` and, unless
    /// `allow_singular`, the absence of poles on the arc.
    pub fn validate(&self, domain: &ArcDomain, allow_singular: bool) -> Result<()> {
        if !(self.constant > 0.0 && self.constant.is_finite()) {
            return Err(Error::InvalidWeight("constant must be positive".into()));
        }
        for p in &self.powers {
            if !(p.node.re.is_finite() && p.node.im.is_finite() && p.exponent.is_finite()) {
                return Err(Error::InvalidWeight("power factors must be finite".into()));
            }
        }
        if let Some(table) = &self.base_table {
            let alpha = domain.alpha();
            let first = table[0].0;
            let last = table[table.len() - 1].0;
            if first > -alpha + 1e-12 || last < alpha - 1e-12 {
                return Err(Error::InvalidWeight(format!(
                    "table covers [{first}, {last}], not [-{alpha}, {alpha}]"
                )));
            }
        }
        if !allow_singular && !self.singular_on_arc(domain).is_empty() {
            return Err(Error::InvalidWeight(
                "negative exponent at a node on the arc (enable allow_singular)".into(),
            ));
        }
        Ok(())
    }

    /// True when `w(ū) = w(u)` on the arc.
    pub fn is_conjugation_symmetric(&self) -> bool {
        let tol = 1e-14;
        let mut unmatched: Vec<PowerFactor> = Vec::new();
        for p in &self.powers {
            if p.node.im.abs() <= tol {
                continue;
            }
            if let Some(i) = unmatched
                .iter()
                .position(|q| (q.node - p.node.conj()).norm() <= tol && (q.exponent - p.exponent).abs() <= tol)
            {
                unmatched.swap_remove(i);
            } else {
                unmatched.push(*p);
            }
        }
        if !unmatched.is_empty() {
            return false;
        }
        match &self.base_table {
            None => true,
            Some(_) => {
                let n = 64;
                (0..=n).all(|k| {
                    let t = std::f64::consts::PI * k as f64 / n as f64;
                    (self.base_at(t) - self.base_at(-t)).abs() <= 1e-12
                })
            }
        }
    }

    /// Base factor at angle θ (1 without a table; clamped outside the table).
    pub fn base_at(&self, theta: f64) -> f64 {
        let Some(table) = &self.base_table else {
            return 1.0;
        };
        let idx = table.partition_point(|&(t, _)| t <= theta);
        if idx == 0 {
            return table[0].1;
        }
        if idx == table.len() {
            return table[table.len() - 1].1;
        }
        let (t0, v0) = table[idx - 1];
        let (t1, v1) = table[idx];
        v0 + (v1 - v0) * (theta - t0) / (t1 - t0)
    }

    /// Evaluates the weight at a point of the arc.
    pub fn eval(&self, u: Complex, domain: &ArcDomain) -> Result<f64> {
        if (u.norm() - 1.0).abs() > CIRCLE_TOL || u.arg().abs() > domain.alpha() + CIRCLE_TOL {
            return Err(Error::OutsideArc);
        }
        self.eval_unchecked(u)
    }

    /// Product formula without the on-arc check.
    pub fn eval_unchecked(&self, u: Complex) -> Result<f64> {
        let mut value = self.constant * self.base_at(u.arg());
        for p in &self.powers {
            let d = (u - p.node).norm();
            if d == 0.0 {
                if p.exponent < 0.0 {
                    return Err(Error::SingularNode);
                }
                if p.exponent > 0.0 {
                    return Ok(0.0);
                }
                continue;
            }
            value *= d.powf(p.exponent);
        }
        Ok(value)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: WeightJson = serde_json::from_str(text).map_err(|e| Error::InvalidWeight(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WeightJson::from(self)).expect("weight serialization")
    }
}

/// Free-function form of [`WeightSpec::eval`].
pub fn eval_weight(spec: &WeightSpec, u: Complex, domain: &ArcDomain) -> Result<f64> {
    spec.eval(u, domain)
}

/// The reduced weight `|rζ − 1|^{l/m} = r^{l/m}·|ζ − 1/r|^{l/m}` of the
/// lemniscate symmetry reduction.
pub fn lemniscate_reduced_weight(m: u32, r: f64, l: u32) -> Result<WeightSpec> {
    if m == 0 || l >= m {
        return Err(Error::InvalidParameter(format!("need 0 <= l < m, got l={l}, m={m}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r = {r} must be positive")));
    }
    if l == 0 {
        return Ok(WeightSpec::unit());
    }
    let s = l as f64 / m as f64;
    WeightSpec::power(Complex::new(1.0 / r, 0.0), s).scaled(r.powf(s))
}

#[derive(Serialize, Deserialize)]
struct PowerJson {
    re: f64,
    im: f64,
    s: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightJson {
    #[serde(rename = "const", default, skip_serializing_if = "Option::is_none")]
    constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    powers: Option<Vec<PowerJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<(f64, f64)>>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
}

impl TryFrom<WeightJson> for WeightSpec {
    type Error = Error;

    fn try_from(raw: WeightJson) -> Result<Self> {
        if raw.constant.is_none() && raw.powers.is_none() && raw.table.is_none() {
            return Err(Error::InvalidWeight(
                "at least one of const, powers, table is required".into(),
            ));
        }
        let mut spec = WeightSpec::constant(raw.constant.unwrap_or(1.0))?;
        for p in raw.powers.unwrap_or_default() {
            spec = spec.with_power(Complex::new(p.re, p.im), p.s);
        }
        if let Some(table) = raw.table {
            let bound = match raw.bound {
                Some(m) => m,
                None => table.iter().map(|&(_, v)| v.max(1.0 / v)).fold(1.0, f64::max),
            };
            spec = spec.with_table(table, bound)?;
        } else if let Some(m) = raw.bound {
            if !(m >= 1.0) {
                return Err(Error::InvalidWeight(format!("bound M = {m} must be >= 1")));
            }
            spec.base_bound = m;
        }
        Ok(spec)
    }
}

impl From<&WeightSpec> for WeightJson {
    fn from(w: &WeightSpec) -> Self {
        WeightJson {
            constant: Some(w.constant),
            powers: if w.powers.is_empty() {
                None
            } else {
                Some(
                    w.powers
                        .iter()
                        .map(|p| PowerJson {
                            re: p.node.re,
                            im: p.node.im,
                            s: p.exponent,
                        })
                        .collect(),
                )
            },
            table: w.base_table.clone(),
            bound: Some(w.base_bound),
        }
    }
}
