//! Shared numerical kernel: normal CDFs, a bracketing root finder and an
//! adaptive two-dimensional quadrature used as an oracle by the tests.

mod normal;
mod quad;
mod roots;

pub use normal::{binorm_cdf, norm_cdf, Correlation};
pub use quad::{quad2d, QuadEstimate, Rect};
pub use roots::{find_root, Bracket};

use thiserror::Error;

/// Errors from the numerical kernel.
#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    #[error("correlation {0} outside [-1, 1]")]
    InvalidCorrelation(f64),
    #[error("no sign change over [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("bracket endpoints invalid: lo={0}, hi={1}")]
    InvalidBracket(f64, f64),
    #[error("root finder hit the iteration limit; best iterate {best} (|f|={f_best:e})")]
    MaxIterations { best: f64, f_best: f64 },
    #[error("quadrature budget exhausted: partial estimate {partial} (error est. {error:e})")]
    QuadratureBudget { partial: f64, error: f64 },
    #[error("empty or inverted integration range [{0}, {1}]")]
    InvalidRegion(f64, f64),
}
