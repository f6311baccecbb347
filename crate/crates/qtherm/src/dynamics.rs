//! Time evolution of the probe: dephasing maps, evolved states, Bloch
//! trajectories, entropy and decoherence-decay fits.
//!
//! Pure dephasing leaves populations alone and multiplies the coherence by
//! e^(-Gamma_eff - i phi(t)). The effective exponent weights the bath factor
//! by the squared combined frequency of the class, Gamma_eff = omega0^2
//! Gamma(T, t), which is what makes the anti-PT probe (smallest omega0)
//! the slowest to decohere. The printed evolved state needs a 1/2 on the
//! off-diagonals to stay unit-trace and positive; it is applied here.

use crate::bath::{self, BathError, SpectralDensity};
use crate::numerics::{eig_hermitian_2x2, linfit, Complex2x2, FitResult, NumericsError};
use crate::qubit::{self, QubitError, QubitSpec, SymmetryClass};
use crate::Tolerances;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum DynamicsError {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("initial state carries no coherence to normalize against")]
    ZeroInitialCoherence,
    #[error("evolution normalization trace vanished ({0:.3e})")]
    VanishingTrace(f64),
    #[error("time grid must be ascending and start at t >= 0")]
    BadTimeGrid,
    #[error("times and values must be equally long with >= 3 usable points")]
    MismatchedSamples,
    #[error(transparent)]
    Bath(#[from] BathError),
    #[error(transparent)]
    Qubit(#[from] QubitError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Validated 2x2 density matrix: unit trace, Hermitian, positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Complex2x2,
}

const STATE_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(m: Complex2x2) -> Result<Self, DynamicsError> {
        if !m.is_finite() {
            return Err(DynamicsError::InvalidState("non-finite entries".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(DynamicsError::InvalidState(format!("trace = {tr}")));
        }
        let herm = m.hermiticity_residual();
        if herm > STATE_TOL {
            return Err(DynamicsError::InvalidState(format!(
                "Hermiticity residual {herm:.3e}"
            )));
        }
        let (vals, _) = eig_hermitian_2x2(&m).map_err(DynamicsError::from_eig)?;
        if vals[0] < -STATE_TOL {
            return Err(DynamicsError::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                vals[0]
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.m
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let (vals, _) = eig_hermitian_2x2(&self.m).expect("validated Hermitian");
        vals
    }

    /// (x, y, z) = (2 Re rho01, 2 Im rho10, rho00 - rho11).
    pub fn bloch(&self) -> BlochVector {
        BlochVector {
            x: 2.0 * self.m[(0, 1)].re,
            y: 2.0 * self.m[(1, 0)].im,
            z: (self.m[(0, 0)] - self.m[(1, 1)]).re,
        }
    }

    pub fn offdiag(&self) -> Complex64 {
        self.m[(0, 1)]
    }
}

impl DynamicsError {
    fn from_eig(e: NumericsError) -> Self {
        DynamicsError::InvalidState(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// One sampled point of a dephasing trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub bloch: BlochVector,
    /// von Neumann entropy of the lab-frame state.
    pub entropy: f64,
    /// Dephasing-frame coherence ratio e^(-Gamma_eff), 1 at t = 0.
    pub coherence: f64,
}

/// Pure initial state cos(theta/2)|0> + e^(i phi0) sin(theta/2)|1>.
pub fn initial_state(theta: f64, phi0: f64) -> DensityMatrix {
    let ct = (0.5 * theta).cos();
    let st = (0.5 * theta).sin();
    let off = Complex64::from_polar(ct * st, -phi0);
    DensityMatrix {
        m: Complex2x2::new(
            Complex64::new(ct * ct, 0.0),
            off,
            off.conj(),
            Complex64::new(st * st, 0.0),
        ),
    }
}

/// Dephasing map: ones on the diagonal, e^(-Gamma -+ i phi) off it.
/// Applied entrywise (Hadamard) to a state.
pub fn dephasing_map(gamma_eff: f64, phi: f64) -> Complex2x2 {
    debug_assert!(gamma_eff >= 0.0);
    let decay = (-gamma_eff).exp();
    let off = Complex64::from_polar(decay, -phi);
    Complex2x2::new(Complex64::ONE, off, off.conj(), Complex64::ONE)
}

/// Class-resolved phase integral: Omega | -Omega | Omega_2 - Omega_1.
pub fn class_phase_omega(
    class: SymmetryClass,
    sd: &SpectralDensity,
    theta_g: f64,
    t: f64,
    order: usize,
) -> Result<f64, BathError> {
    match class {
        SymmetryClass::Hermitian => bath::omega_phase_with_order(sd, theta_g, t, order),
        SymmetryClass::PT => Ok(-bath::omega_phase_with_order(sd, theta_g, t, order)?),
        SymmetryClass::APT => {
            Ok(bath::omega2(sd, theta_g, t)? - bath::omega1_with_order(sd, theta_g, t, order)?)
        }
    }
}

/// Accumulated phase phi(t) - phi0 = -2 omega0 t + omega0 Omega_class(t).
pub fn dynamical_phase(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    t: f64,
    order: usize,
) -> Result<f64, DynamicsError> {
    let w0 = qubit::omega0(spec)?;
    let om = class_phase_omega(spec.class, sd, spec.theta_g, t, order)?;
    Ok(-2.0 * w0 * t + w0 * om)
}

/// Effective decoherence exponent omega0^2 Gamma(T, t) and its temperature
/// derivative.
pub fn gamma_eff_pair(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
    tol: &Tolerances,
) -> Result<(f64, f64), DynamicsError> {
    let w0 = qubit::omega0(spec)?;
    let (g, dg) = bath::gamma_thermal_pair(sd, temperature, t, tol)?;
    Ok((w0 * w0 * g, w0 * w0 * dg))
}

/// Evolve a state under the dephasing channel for time t.
pub fn evolve(
    state0: &DensityMatrix,
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
) -> Result<DensityMatrix, DynamicsError> {
    evolve_with(state0, spec, sd, temperature, t, &Tolerances::default())
}

pub fn evolve_with(
    state0: &DensityMatrix,
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
    tol: &Tolerances,
) -> Result<DensityMatrix, DynamicsError> {
    if t == 0.0 {
        return Ok(*state0);
    }
    let (gamma_eff, _) = gamma_eff_pair(spec, sd, temperature, t, tol)?;
    let phi = dynamical_phase(spec, sd, t, tol.quad_order)?;
    let rho = dephasing_map(gamma_eff, phi).hadamard(state0.matrix());
    DensityMatrix::new(rho)
}

/// Closed-form non-Hermitian evolution
/// rho(t) = U rho U^dagger / Tr[U rho U^dagger], U = exp(-i H t) built from
/// the biorthonormal eigensystem.
pub fn nh_evolve(
    spec: &QubitSpec,
    state0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix, DynamicsError> {
    if t == 0.0 {
        return Ok(*state0);
    }
    let es = qubit::eigensystem(spec)?;
    let outer = |r: [Complex64; 2], l: [Complex64; 2]| {
        Complex2x2::new(r[0] * l[0], r[0] * l[1], r[1] * l[0], r[1] * l[1])
    };
    let mi = Complex64::new(0.0, -1.0);
    let u = outer(es.right_plus, es.left_plus).scale((mi * es.e_plus * t).exp())
        + outer(es.right_minus, es.left_minus).scale((mi * es.e_minus * t).exp());
    let x = u * *state0.matrix() * u.adjoint();
    let tr = x.trace();
    if tr.norm() < 1e-14 {
        return Err(DynamicsError::VanishingTrace(tr.norm()));
    }
    let rho = x.scale(Complex64::new(1.0, 0.0) / tr);
    // symmetrize away the last bits of roundoff before validating
    let rho = (rho + rho.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityMatrix::new(rho)
}

/// Fixed-step RK4 integration of the normalized non-Hermitian Liouville
/// equation d rho/dt = -i [H_R, rho] + {H_I, rho} - 2 rho Tr(rho H_I).
/// Cross-check oracle for [`nh_evolve`].
pub fn nh_evolve_rk4(
    spec: &QubitSpec,
    state0: &DensityMatrix,
    t: f64,
    step: f64,
) -> Result<DensityMatrix, DynamicsError> {
    debug_assert!(step > 0.0);
    let h_full = qubit::hamiltonian(spec);
    let half = Complex64::new(0.5, 0.0);
    let h_r = (h_full + h_full.adjoint()).scale(half);
    let h_i = (h_full - h_full.adjoint()).scale(Complex64::new(0.0, -0.5));
    let mi = Complex64::new(0.0, -1.0);

    let rhs = |rho: &Complex2x2| -> Complex2x2 {
        let comm = (h_r * *rho - *rho * h_r).scale(mi);
        let anti = h_i * *rho + *rho * h_i;
        let tr = (*rho * h_i).trace();
        comm + anti - rho.scale(tr * 2.0)
    };

    let n = (t / step).ceil().max(1.0) as usize;
    let h = t / n as f64;
    let hc = Complex64::new(h, 0.0);
    let sixth = Complex64::new(1.0 / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut rho = *state0.matrix();
    for _ in 0..n {
        let k1 = rhs(&rho);
        let k2 = rhs(&(rho + k1.scale(hc * half)));
        let k3 = rhs(&(rho + k2.scale(hc * half)));
        let k4 = rhs(&(rho + k3.scale(hc)));
        rho = rho + (k1 + k2.scale(two) + k3.scale(two) + k4).scale(hc * sixth);
        // keep the nonlinear normalization constraint from drifting
        let tr = rho.trace();
        rho = rho.scale(Complex64::new(1.0, 0.0) / tr);
    }
    let rho = (rho + rho.adjoint()).scale(half);
    DensityMatrix::new(rho)
}

/// Dephasing trajectory through the diagonal frame of the probe.
///
/// The initial state is transformed with the class similarity transform T,
/// dephased there (decay e^(-Gamma_eff), phase -2 omega0 t + omega0
/// Omega_class), and mapped back through T^-1 with per-time normalization.
pub fn bloch_trajectory(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    theta0: f64,
    times: &[f64],
) -> Result<Vec<TrajectoryPoint>, DynamicsError> {
    bloch_trajectory_with(spec, sd, temperature, theta0, times, &Tolerances::default())
}

pub fn bloch_trajectory_with(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    theta0: f64,
    times: &[f64],
    tol: &Tolerances,
) -> Result<Vec<TrajectoryPoint>, DynamicsError> {
    if times.is_empty() || times[0] < 0.0 || times.windows(2).any(|w| w[0] > w[1]) {
        return Err(DynamicsError::BadTimeGrid);
    }
    let w0 = qubit::omega0(spec)?;
    let t_mat = qubit::similarity_transform(spec)?;
    let t_inv = t_mat.inverse()?;

    let rho0 = initial_state(theta0, 0.0);
    let mut rho_d0 = t_mat * *rho0.matrix() * t_mat.adjoint();
    let tr0 = rho_d0.trace();
    rho_d0 = rho_d0.scale(Complex64::new(1.0, 0.0) / tr0);

    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let (gamma, _) = bath::gamma_thermal_pair(sd, temperature, t, tol)?;
        let gamma_eff = w0 * w0 * gamma;
        let om = class_phase_omega(spec.class, sd, spec.theta_g, t, tol.quad_order)?;
        let phi = -2.0 * w0 * t + w0 * om;
        let rho_d = dephasing_map(gamma_eff, phi).hadamard(&rho_d0);
        let mut lab = t_inv * rho_d * t_inv.adjoint();
        let tr = lab.trace();
        if tr.norm() < 1e-14 {
            return Err(DynamicsError::VanishingTrace(tr.norm()));
        }
        lab = lab.scale(Complex64::new(1.0, 0.0) / tr);
        let lab = (lab + lab.adjoint()).scale(Complex64::new(0.5, 0.0));
        let state = DensityMatrix::new(lab)?;
        out.push(TrajectoryPoint {
            t,
            bloch: state.bloch(),
            entropy: entropy(&state),
            coherence: (-gamma_eff).exp(),
        });
    }
    Ok(out)
}

/// Coherence of `rho` normalized to a reference state, |rho01| / |rho01_ref|.
pub fn coherence(rho: &DensityMatrix, reference: &DensityMatrix) -> Result<f64, DynamicsError> {
    let r0 = reference.offdiag().norm();
    if r0 < 1e-14 {
        return Err(DynamicsError::ZeroInitialCoherence);
    }
    Ok(rho.offdiag().norm() / r0)
}

/// von Neumann entropy -sum lambda ln lambda, in nats; 0 for pure states,
/// ln 2 for the maximally mixed state.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    let vals = rho.eigenvalues();
    let mut s = 0.0;
    for v in vals {
        if v > 0.0 {
            s -= v * v.ln();
        }
    }
    s.max(0.0)
}

/// Fit D(t) = exp(-t/a) by regressing ln D on t, dropping the noise-
/// dominated near-zero plateau (points with D <= floor).
pub fn fit_decoherence(
    times: &[f64],
    d_values: &[f64],
    floor: f64,
) -> Result<FitResult, DynamicsError> {
    if times.len() != d_values.len() {
        return Err(DynamicsError::MismatchedSamples);
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &d) in times.iter().zip(d_values) {
        if d > floor {
            xs.push(t);
            ys.push(d.ln());
        }
    }
    if xs.len() < 3 {
        return Err(DynamicsError::MismatchedSamples);
    }
    Ok(linfit(&xs, &ys)?)
}
