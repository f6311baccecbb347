//! Self-contained numerical kernel.
//!
//! Everything in here is a pure function of its inputs; no global state
//! beyond a cache of quadrature nodes, so all operations are safe to call
//! from any number of threads.

mod fit;
mod mat2;
mod optimize;
mod quad;
mod series;
mod special;

pub use fit::{linfit, FitResult};
pub use mat2::{eig_hermitian_2x2, Complex2x2};
pub use optimize::maximize_1d;
pub use quad::{integrate_halfline, integrate_halfline_weighted};
pub use series::{sum_series, SeriesResult};
pub use special::gamma_fn;

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    #[error("gamma function pole at x = {0} (zero or negative integer)")]
    GammaPole(f64),
    #[error("integrand returned a non-finite value at omega = {0}")]
    NonFiniteIntegrand(f64),
    #[error("quadrature order {0} out of range (need 8 ..= {max})", max = quad::MAX_ORDER)]
    InvalidOrder(usize),
    #[error("quadrature weight exponent alpha = {0} must be > -1")]
    InvalidAlpha(f64),
    #[error("linear fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("linear fit is degenerate: all abscissae equal")]
    DegenerateAbscissae,
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is singular to working precision (|det| = {0:.3e})")]
    SingularMatrix(f64),
}

/// Two-sided finite difference (f(x+h) - f(x-h)) / 2h.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    debug_assert!(h > 0.0);
    (f(x + h) - f(x - h)) / (2.0 * h)
}
