use num_complex::Complex64;
use thiserror::Error;

use crate::scherk::StepBoundary;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("finite-difference stencil around ({u}, {v}) leaves the sampled patch")]
    StencilOutOfDomain { u: f64, v: f64 },

    #[error("origin value has imaginary part {im:e} (real part {re:e}); quadrature or data bug")]
    NotReal { re: f64, im: f64 },

    #[error("spectral tables deviate from direct quadrature by {deviation:e}")]
    BackendMismatch { deviation: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last update {last:e})")]
    NotConverged { iterations: usize, last: f64, history: Vec<f64> },

    #[error("fixed-point iteration diverged at iteration {iteration}")]
    Diverged { iteration: usize, history: Vec<f64> },

    #[error("Beltrami residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("denormalized map residual {after:e} is more than 10x the input residual {before:e}")]
    InconsistentDenormalization { before: f64, after: f64 },

    #[error("ring Fourier analysis is inconsistent across rings (spread {spread:e}); map too noisy")]
    NoisyMap { spread: f64 },

    #[error("curvature pole: p(z) = 0 at z = {0}")]
    CurvaturePole(Complex64),

    #[error("height integral is path dependent: closed-loop value {0:e}")]
    PathDependence(f64),

    #[error("planar projection folds over near ({u}, {v})")]
    FoldOver { u: f64, v: f64 },

    #[error("quadrilateral matching stalled with residual {residual:e}")]
    NoMatch { residual: f64, best: Box<StepBoundary> },

    #[error("extrapolation unreliable: {reason}")]
    ExtrapolationUnreliable { reason: String, rows: Vec<[f64; 2]> },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Domain(_) => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}
