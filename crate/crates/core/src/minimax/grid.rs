use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lemniscate::LemniscateSpec;
use crate::point::Complex;
use crate::potential::ArcDomain;
use crate::weights::WeightSpec;

/// Distinct m-th roots closer than this are merged (the multiple point 0 at r = 1).
const DEDUP_RADIUS: f64 = 1e-10;
/// Geometric refinement levels placed around an excluded singular node.
const GRADING_LEVELS: i32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GridStrategy {
    /// `θ_j = −α cos(jπ/(N − 1))`, clustered at the endpoints.
    #[default]
    ChebyshevTheta,
    UniformTheta,
    /// Union of the two node sets.
    Hybrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridParam {
    /// Index of the m-th root (always 0 on an arc).
    pub branch: u32,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridTarget {
    Arc(ArcDomain),
    Lemniscate(LemniscateSpec),
}

impl GridTarget {
    pub fn alpha(&self) -> f64 {
        match self {
            GridTarget::Arc(d) => d.alpha(),
            GridTarget::Lemniscate(s) => s.alpha,
        }
    }

    pub fn capacity(&self) -> f64 {
        match self {
            GridTarget::Arc(d) => d.capacity(),
            GridTarget::Lemniscate(s) => s.capacity(),
        }
    }
}

/// A discretized arc or lemniscatic arc with cached weight values.
#[derive(Clone, Debug)]
pub struct Grid {
    target: GridTarget,
    strategy: GridStrategy,
    points: Vec<Complex>,
    params: Vec<GridParam>,
    weight_values: Vec<f64>,
}

/// Default grid size for degree `n`: `max(16n + 64, 1024)`.
pub fn default_grid_size(n: usize) -> usize {
    (16 * n + 64).max(1024)
}

/// Angles of the discretization, symmetric about 0 and containing 0 for odd sizes.
pub fn theta_nodes(alpha: f64, size: usize, strategy: GridStrategy) -> Vec<f64> {
    if size == 1 {
        return vec![0.0];
    }
    let last = (size - 1) as f64;
    let cheb = || {
        (0..size).map(move |j| {
            let x = std::f64::consts::FRAC_PI_2 * (2.0 * j as f64 - last) / last;
            alpha * x.sin()
        })
    };
    let uniform = || (0..size).map(move |j| alpha * (2.0 * j as f64 - last) / last);
    let mut nodes: Vec<f64> = match strategy {
        GridStrategy::ChebyshevTheta => cheb().collect(),
        GridStrategy::UniformTheta => uniform().collect(),
        GridStrategy::Hybrid => cheb().chain(uniform()).collect(),
    };
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    nodes
}

/// Unweighted grid on an arc or lemniscatic arc.
pub fn build_grid(target: &GridTarget, size: usize, strategy: GridStrategy) -> Result<Grid> {
    if size < 2 {
        return Err(Error::SizeTooSmall { size, required: 2 });
    }
    let thetas = theta_nodes(target.alpha(), size, strategy);
    let (points, params) = match target {
        GridTarget::Arc(_) => (
            thetas.iter().map(|&t| Complex::from_polar(1.0, t)).collect(),
            thetas.iter().map(|&theta| GridParam { branch: 0, theta }).collect(),
        ),
        GridTarget::Lemniscate(spec) => lemniscate_points(spec, &thetas),
    };
    let weight_values = vec![1.0; points.len()];
    Ok(Grid {
        target: *target,
        strategy,
        points,
        params,
        weight_values,
    })
}

fn lemniscate_points(spec: &LemniscateSpec, thetas: &[f64]) -> (Vec<Complex>, Vec<GridParam>) {
    let m = spec.m as usize;
    let mut points = Vec::with_capacity(m * thetas.len());
    let mut params = Vec::with_capacity(m * thetas.len());
    for branch in 0..m {
        for &theta in thetas {
            let v = Complex::from_polar(spec.r, theta) - 1.0;
            let z = m_th_root(v, spec.m, branch as u32);
            // Coincident roots only occur for the same θ (v = 0).
            let dup = (0..branch).any(|b| (m_th_root(v, spec.m, b as u32) - z).norm() < DEDUP_RADIUS);
            if !dup {
                points.push(z);
                params.push(GridParam {
                    branch: branch as u32,
                    theta,
                });
            }
        }
    }
    (points, params)
}

fn m_th_root(v: Complex, m: u32, branch: u32) -> Complex {
    if v == Complex::new(0.0, 0.0) {
        return v;
    }
    let (rho, phi) = v.to_polar();
    let tau = std::f64::consts::TAU;
    Complex::from_polar(rho.powf(1.0 / m as f64), (phi + tau * branch as f64) / m as f64)
}

impl Grid {
    /// Arc grid with cached weight values. With `allow_singular`, on-arc poles
    /// are removed from the grid and surrounded by geometrically graded nodes.
    pub fn weighted(
        domain: &ArcDomain,
        size: usize,
        strategy: GridStrategy,
        weight: &WeightSpec,
        allow_singular: bool,
    ) -> Result<Grid> {
        weight.validate(domain, allow_singular)?;
        let mut thetas = theta_nodes(domain.alpha(), size.max(2), strategy);
        let singular: Vec<f64> = weight
            .singular_on_arc(domain)
            .into_iter()
            .map(|i| weight.powers()[i].node.arg())
            .collect();
        for &ts in &singular {
            let (below, above) = neighbours(&thetas, ts);
            thetas.retain(|&t| (t - ts).abs() > 1e-13);
            for (h, sign) in [(ts - below, -1.0), (above - ts, 1.0)] {
                if h <= 0.0 {
                    continue;
                }
                for k in 1..=GRADING_LEVELS {
                    let t = ts + sign * h * 0.5f64.powi(k);
                    if t.abs() <= domain.alpha() {
                        thetas.push(t);
                    }
                }
            }
        }
        thetas.sort_by(f64::total_cmp);
        thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

        let points: Vec<Complex> = thetas.iter().map(|&t| Complex::from_polar(1.0, t)).collect();
        let weight_values = points
            .iter()
            .map(|&u| weight.eval_unchecked(u))
            .collect::<Result<Vec<f64>>>()?;
        if !weight_values.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeight("weight vanishes on the whole grid".into()));
        }
        Ok(Grid {
            target: GridTarget::Arc(*domain),
            strategy,
            params: thetas.iter().map(|&theta| GridParam { branch: 0, theta }).collect(),
            points,
            weight_values,
        })
    }

    /// Grid restricted to the given indices (in the given order).
    pub fn subset(&self, indices: &[usize]) -> Grid {
        Grid {
            target: self.target,
            strategy: self.strategy,
            points: indices.iter().map(|&i| self.points[i]).collect(),
            params: indices.iter().map(|&i| self.params[i]).collect(),
            weight_values: indices.iter().map(|&i| self.weight_values[i]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn params(&self) -> &[GridParam] {
        &self.params
    }

    pub fn weight_values(&self) -> &[f64] {
        &self.weight_values
    }

    pub fn target(&self) -> &GridTarget {
        &self.target
    }

    pub fn strategy(&self) -> GridStrategy {
        self.strategy
    }
}

fn neighbours(sorted: &[f64], t: f64) -> (f64, f64) {
    let idx = sorted.partition_point(|&x| x < t - 1e-13);
    let below = if idx > 0 { sorted[idx - 1] } else { t };
    let mut j = idx;
    while j < sorted.len() && (sorted[j] - t).abs() <= 1e-13 {
        j += 1;
    }
    let above = if j < sorted.len() { sorted[j] } else { t };
    (below, above)
}
