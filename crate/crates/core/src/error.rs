use thiserror::Error;

use crate::minimax::PolySolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arc angle {alpha} outside the admissible range ({min}, {max})")]
    InvalidAngle { alpha: f64, min: f64, max: f64 },

    #[error("point lies on the arc (distance {distance:e})")]
    PointOnArc { distance: f64 },

    #[error("|w| = {modulus} is below the image radius {radius}")]
    OutsideImage { modulus: f64, radius: f64 },

    #[error("the Green's function has its pole at infinity")]
    InfinityPole,

    #[error("quadrature did not reach tolerance {tolerance:e} (last estimate {estimate}, error {error:e})")]
    QuadratureFailure { tolerance: f64, estimate: f64, error: f64 },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("weight evaluated at a node with negative exponent")]
    SingularNode,

    #[error("point is not on the arc")]
    OutsideArc,

    #[error("grid of {size} points is too small (need at least {required})")]
    SizeTooSmall { size: usize, required: usize },

    #[error("minimax solver hit the iteration cap after {} iterations", .solution.iterations)]
    NoConvergence { solution: Box<PolySolution> },

    #[error("normalization point coincides with a grid point")]
    DegenerateNormalization,

    #[error("operation requires a {expected} normalization")]
    WrongNormalization { expected: &'static str },

    #[error("linear program failed: {0}")]
    LpFailure(String),

    #[error("extremal set is empty")]
    EmptyExtremalSet,

    #[error("u0 must lie in the open unit disk")]
    U0OutsideDisk,

    #[error("extrapolation fit is ill-conditioned: {0}")]
    IllConditionedFit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
