//! Discrete orthonormal polynomial basis built by Arnoldi iteration on the
//! grid (Vandermonde-with-Arnoldi). Stored as Hessenberg recurrence data, so
//! the basis can be evaluated anywhere without forming monomials.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::Complex;

#[derive(Clone, Debug, Serialize)]
pub struct ArnoldiBasis {
    q0: f64,
    /// Column k holds `h_{0..=k+1, k}`; `h_{k+1,k}` is real and positive.
    hessenberg: Vec<Vec<Complex>>,
}

impl ArnoldiBasis {
    /// Orthonormalizes `1, z, …, z^degree` in `⟨f, g⟩ = Σ m_j conj(f_j) g_j`.
    /// Returns the basis and the values `values[k][j] = q_k(points[j])`.
    pub fn build(points: &[Complex], measure: &[f64], degree: usize) -> Result<(Self, Vec<Vec<Complex>>)> {
        let mass: f64 = measure.iter().sum();
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter("basis measure has no mass".into()));
        }
        let q0 = 1.0 / mass.sqrt();
        let mut values: Vec<Vec<Complex>> = Vec::with_capacity(degree + 1);
        values.push(vec![Complex::new(q0, 0.0); points.len()]);
        let mut hessenberg = Vec::with_capacity(degree);
        let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);

        for k in 1..=degree {
            let mut v: Vec<Complex> = points.iter().zip(&values[k - 1]).map(|(z, q)| z * q).collect();
            let mut h = vec![Complex::new(0.0, 0.0); k + 1];
            // Classical Gram–Schmidt, applied twice.
            for _ in 0..2 {
                for (i, qi) in values.iter().enumerate() {
                    let c: Complex = measure.iter().zip(qi).zip(&v).map(|((m, q), x)| q.conj() * x * m).sum();
                    for (x, q) in v.iter_mut().zip(qi) {
                        *x -= c * q;
                    }
                    h[i] += c;
                }
            }
            let norm = measure
                .iter()
                .zip(&v)
                .map(|(m, x)| m * x.norm_sqr())
                .sum::<f64>()
                .sqrt();
            if !(norm > 1e-14 * scale) {
                return Err(Error::InvalidParameter(format!(
                    "discrete measure supports fewer than {} points",
                    k + 1
                )));
            }
            h[k] = Complex::new(norm, 0.0);
            for x in v.iter_mut() {
                *x /= norm;
            }
            values.push(v);
            hessenberg.push(h);
        }
        Ok((ArnoldiBasis { q0, hessenberg }, values))
    }

    pub fn degree(&self) -> usize {
        self.hessenberg.len()
    }

    /// `q_0(u), …, q_n(u)`
    pub fn eval(&self, u: Complex) -> Vec<Complex> {
        let mut q = Vec::with_capacity(self.degree() + 1);
        q.push(Complex::new(self.q0, 0.0));
        for (k, h) in self.hessenberg.iter().enumerate() {
            let mut v = u * q[k];
            for (i, hi) in h[..=k].iter().enumerate() {
                v -= hi * q[i];
            }
            q.push(v / h[k + 1].re);
        }
        q
    }

    /// `values[k][j] = q_k(points[j])`
    pub fn eval_many(&self, points: &[Complex]) -> Vec<Vec<Complex>> {
        let mut values = vec![vec![Complex::new(0.0, 0.0); points.len()]; self.degree() + 1];
        for (j, &z) in points.iter().enumerate() {
            for (k, q) in self.eval(z).into_iter().enumerate() {
                values[k][j] = q;
            }
        }
        values
    }

    /// Leading monomial coefficient of `q_k`.
    pub fn leading(&self, k: usize) -> f64 {
        self.hessenberg[..k]
            .iter()
            .fold(self.q0, |acc, h| acc / h[h.len() - 1].re)
    }

    /// Monomial coefficients (constant term first) of `Σ c_k q_k`.
    pub fn monomial_coefficients(&self, coeffs: &[Complex]) -> Vec<Complex> {
        let n = self.degree();
        let zero = Complex::new(0.0, 0.0);
        let mut polys: Vec<Vec<Complex>> = Vec::with_capacity(n + 1);
        polys.push(vec![Complex::new(self.q0, 0.0)]);
        for (k, h) in self.hessenberg.iter().enumerate() {
            let mut next = vec![zero; k + 2];
            for (i, c) in polys[k].iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, hi) in h[..=k].iter().enumerate() {
                for (j, c) in polys[i].iter().enumerate() {
                    next[j] -= hi * c;
                }
            }
            let d = h[k + 1].re;
            for c in next.iter_mut() {
                *c /= d;
            }
            polys.push(next);
        }
        let mut out = vec![zero; coeffs.len().max(1)];
        for (ck, p) in coeffs.iter().zip(&polys) {
            for (j, c) in p.iter().enumerate() {
                out[j] += ck * c;
            }
        }
        out
    }
}
