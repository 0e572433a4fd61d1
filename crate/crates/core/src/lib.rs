//! Weighted Chebyshev and residual polynomials on circular arcs and
//! lemniscatic arcs.
//!
//! The crate has two halves that check each other:
//!
//! * [`minimax`] computes grid-optimal weighted Chebyshev polynomials
//!   `T_n(·, u0)` by iteratively reweighted least squares followed by an
//!   interior-point polish, together with an optimality certificate and a
//!   linear-programming oracle for small degrees.
//! * [`potential`] and [`asymptotics`] evaluate the explicit conformal maps,
//!   Green's function, equilibrium/harmonic-measure integrals and the
//!   closed-form limits of Widom factors and residual polynomials.
//!
//! [`lemniscate`] reduces Chebyshev problems on `{z : z^m + 1 ∈ rΓ_α}` to
//! weighted problems on the arc.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod lemniscate;
pub mod minimax;
pub mod point;
pub mod potential;
pub mod quadrature;
pub mod weights;

pub use asymptotics::{PredictionKind, PredictionReport};
pub use error::{Error, Result};
pub use lemniscate::LemniscateSpec;
pub use minimax::{Grid, GridStrategy, GridTarget, Normalization, PolySolution, SolverConfig};
pub use point::{Complex, ComplexPoint};
pub use potential::ArcDomain;
pub use weights::WeightSpec;
