//! Numerical kernels shared by the physics modules: finite-difference
//! derivatives, adaptive quadrature, bracketed root finding and
//! Levenberg–Marquardt curve fitting.

mod diff;
mod fit;
mod quad;
mod roots;

pub use diff::{default_step, derivative, try_derivative, try_derivative_refined};
pub use fit::{fit_curve, FitOptions, FitResult, Observation};
pub use quad::{integrate, MAX_DEPTH};
pub use roots::find_root;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("function returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not reach tolerance {tol:e}; best estimate {estimate}")]
    Tolerance { estimate: f64, tol: f64 },
    #[error("no sign change in bracket [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },
    #[error("singular normal equations: parameter {0} has no influence on the residuals")]
    DegenerateFit(usize),
    #[error("fit did not converge within {} iterations", .best.iterations)]
    NonConvergence { best: Box<FitResult> },
}
