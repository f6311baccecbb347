//! Dephasing-based quantum thermometry for two-level probes.
//!
//! A qubit coupled to a bosonic reservoir through a dephasing interaction
//! picks up a temperature-dependent decoherence factor. Measuring the qubit
//! after a tuned interaction time turns it into a thermometer. This crate
//! implements the full pipeline:
//!
//! * [`numerics`] — special functions, quadrature, series summation,
//!   1-D maximization, regression and 2x2 complex linear algebra.
//! * [`bath`] — Ohmic-class spectral densities, vacuum and thermal
//!   decoherence factors and the phase integrals they drive.
//! * [`qubit`] — Hermitian, PT-symmetric and anti-PT-symmetric probe
//!   Hamiltonians, their similarity transforms and biorthonormal
//!   eigensystems.
//! * [`dynamics`] — dephasing maps, evolved density matrices, Bloch
//!   trajectories, von Neumann entropy and decoherence-decay fits.
//! * [`thermometry`] — quantum Fisher information, projective Fisher
//!   information, quantum signal-to-noise ratio, interaction-time and
//!   temperature optimization, and a Monte-Carlo estimator check.
//!
//! Frequencies are dimensionless (normalized to the probe splitting),
//! temperature is in the same units (k_B = hbar = 1).

pub mod bath;
pub mod dynamics;
pub mod numerics;
pub mod qubit;
pub mod thermometry;

/// Numerical knobs shared by the higher-level modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for thermal-series convergence.
    pub series_tol: f64,
    /// Hard cap on the number of directly summed series terms.
    pub series_cap: usize,
    /// Gauss-Laguerre order for the phase integrals.
    pub quad_order: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            series_tol: 1e-10,
            series_cap: 1_000_000,
            quad_order: 64,
        }
    }
}

pub use bath::{DephasingRecord, SpectralDensity};
pub use dynamics::{BlochVector, DensityMatrix, TrajectoryPoint};
pub use numerics::{Complex2x2, FitResult, SeriesResult};
pub use qubit::{EigenSystem, QubitSpec, SymmetryClass};
pub use thermometry::{EstimationPoint, Optimum};
