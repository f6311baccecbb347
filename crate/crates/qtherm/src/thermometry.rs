//! Temperature estimation: quantum Fisher information of the dephased
//! probe, projective Fisher information, signal-to-noise, and the
//! interaction-time / temperature optimization, plus a seeded Monte-Carlo
//! check that a maximum-likelihood readout saturates the Cramer-Rao bound.

use crate::bath::{BathError, SpectralDensity};
use crate::dynamics::{self, DensityMatrix, DynamicsError};
use crate::numerics::{eig_hermitian_2x2, maximize_1d, Complex2x2, NumericsError};
use crate::qubit::{QubitError, QubitSpec};
use crate::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ThermometryError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("state derivative must be Hermitian and traceless (residual {0:.3e})")]
    BadStateDerivative(f64),
    #[error(transparent)]
    Bath(#[from] BathError),
    #[error(transparent)]
    Qubit(#[from] QubitError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// One sample of the estimation landscape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationPoint {
    pub temperature: f64,
    pub t: f64,
    pub qfi: f64,
    pub qsnr: f64,
}

impl EstimationPoint {
    pub fn new(temperature: f64, t: f64, qfi: f64) -> Self {
        Self { temperature, t, qfi, qsnr: qsnr(temperature, qfi) }
    }
}

/// Result of a 1-D optimization with its search window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub argument: f64,
    pub value: f64,
    pub search_lo: f64,
    pub search_hi: f64,
    /// True when the maximum sits at the upper edge of the window, the
    /// signature of super-Ohmic low-temperature saturation rather than an
    /// interior peak.
    pub boundary: bool,
}

/// QFI of the dephased probe:
/// H = sin^2(theta) (dGamma_eff/dT)^2 / (e^(2 Gamma_eff) - 1),
/// with Gamma_eff = omega0^2 Gamma(T, t). Zero at t = 0 by the limit.
pub fn qfi_dephasing(
    theta: f64,
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
) -> Result<f64, ThermometryError> {
    qfi_dephasing_with(theta, spec, sd, temperature, t, &Tolerances::default())
}

pub fn qfi_dephasing_with(
    theta: f64,
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
    tol: &Tolerances,
) -> Result<f64, ThermometryError> {
    if t < 0.0 {
        return Err(ThermometryError::InvalidArgument(format!("t = {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let (gamma_eff, dgamma_eff) = dynamics::gamma_eff_pair(spec, sd, temperature, t, tol)?;
    let denom = (2.0 * gamma_eff).exp_m1();
    if denom <= 0.0 {
        return Ok(0.0);
    }
    let st = theta.sin();
    Ok(st * st * dgamma_eff * dgamma_eff / denom)
}

/// Spectral-decomposition QFI from a state and its temperature derivative:
/// the eigenvalue (classical) term plus the eigenvector rotation term,
/// assembled as sum_{nm} 2 |<v_n| drho |v_m>|^2 / (lambda_n + lambda_m)
/// with vanishing-weight pairs dropped.
pub fn qfi_general(rho: &DensityMatrix, drho_dt: &Complex2x2) -> Result<f64, ThermometryError> {
    let herm = drho_dt.hermiticity_residual();
    let tracelessness = drho_dt.trace().norm();
    if herm > 1e-10 || tracelessness > 1e-10 {
        return Err(ThermometryError::BadStateDerivative(herm.max(tracelessness)));
    }
    let (vals, vecs) = eig_hermitian_2x2(rho.matrix())?;
    let mut h = 0.0;
    for n in 0..2 {
        for m in 0..2 {
            let w = vals[n] + vals[m];
            if w < 1e-12 {
                continue;
            }
            // <v_n| drho |v_m>
            let dv = drho_dt.apply(vecs[m]);
            let amp = vecs[n][0].conj() * dv[0] + vecs[n][1].conj() * dv[1];
            h += 2.0 * amp.norm_sqr() / w;
        }
    }
    Ok(h)
}

/// Classical Fisher information of the two-outcome projective measurement
/// along the equatorial azimuth `phi_meas`:
/// F = sum_pm (dT p_pm)^2 / p_pm, p_pm = (1 +- r . n)/2.
pub fn fisher_info_projective(
    phi_meas: f64,
    theta: f64,
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
) -> Result<f64, ThermometryError> {
    fisher_info_projective_with(phi_meas, theta, spec, sd, temperature, t, &Tolerances::default())
}

pub fn fisher_info_projective_with(
    phi_meas: f64,
    theta: f64,
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
    tol: &Tolerances,
) -> Result<f64, ThermometryError> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let state0 = dynamics::initial_state(theta, 0.0);
    let rho = dynamics::evolve_with(&state0, spec, sd, temperature, t, tol)?;
    let r = rho.bloch();
    let (_, dgamma_eff) = dynamics::gamma_eff_pair(spec, sd, temperature, t, tol)?;
    // only the transverse components carry temperature dependence
    let projection = r.x * phi_meas.cos() + r.y * phi_meas.sin();
    let dp = -0.5 * dgamma_eff * projection;
    let p_plus = 0.5 * (1.0 + projection);
    let p_minus = 0.5 * (1.0 - projection);
    let mut f = 0.0;
    for (p, dpk) in [(p_plus, dp), (p_minus, -dp)] {
        if p > 1e-14 {
            f += dpk * dpk / p;
        }
    }
    Ok(f)
}

/// Quantum signal-to-noise ratio Q = T^2 H.
pub fn qsnr(temperature: f64, qfi: f64) -> f64 {
    temperature * temperature * qfi
}

/// Interaction time maximizing the QFI at fixed temperature, theta = pi/2.
pub fn optimal_time(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t_max: f64,
) -> Result<Optimum, ThermometryError> {
    optimal_time_with(spec, sd, temperature, t_max, &Tolerances::default())
}

pub fn optimal_time_with(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t_max: f64,
    tol: &Tolerances,
) -> Result<Optimum, ThermometryError> {
    if !(t_max > 0.0) {
        return Err(ThermometryError::InvalidArgument(format!("t_max = {t_max}")));
    }
    let f = |t: f64| {
        qfi_dephasing_with(FRAC_PI_2, spec, sd, temperature, t, tol).unwrap_or(f64::NEG_INFINITY)
    };
    let xtol = t_max * 1e-9;
    let (t_star, value) = maximize_1d(f, 0.0, t_max, xtol);
    if !value.is_finite() {
        return Err(ThermometryError::InvalidArgument(
            "QFI evaluation failed inside the search window".into(),
        ));
    }
    Ok(Optimum {
        argument: t_star,
        value,
        search_lo: 0.0,
        search_hi: t_max,
        boundary: t_max - t_star <= 10.0 * xtol,
    })
}

/// Temperature maximizing the QFI at fixed interaction time; the scan runs
/// in log-temperature so log-spaced windows refine evenly.
pub fn optimal_temperature(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    t: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<Optimum, ThermometryError> {
    optimal_temperature_with(spec, sd, t, t_lo, t_hi, &Tolerances::default())
}

pub fn optimal_temperature_with(
    spec: &QubitSpec,
    sd: &SpectralDensity,
    t: f64,
    t_lo: f64,
    t_hi: f64,
    tol: &Tolerances,
) -> Result<Optimum, ThermometryError> {
    if !(t_lo > 0.0 && t_lo < t_hi && t > 0.0) {
        return Err(ThermometryError::InvalidArgument(format!(
            "need 0 < T_lo < T_hi and t > 0, got T_lo={t_lo} T_hi={t_hi} t={t}"
        )));
    }
    let f = |x: f64| {
        qfi_dephasing_with(FRAC_PI_2, spec, sd, x.exp(), t, tol).unwrap_or(f64::NEG_INFINITY)
    };
    let (llo, lhi) = (t_lo.ln(), t_hi.ln());
    let xtol = 1e-10_f64.max((lhi - llo) * 1e-10);
    let (x_star, value) = maximize_1d(f, llo, lhi, xtol);
    if !value.is_finite() {
        return Err(ThermometryError::InvalidArgument(
            "QFI evaluation failed inside the search window".into(),
        ));
    }
    Ok(Optimum {
        argument: x_star.exp(),
        value,
        search_lo: t_lo,
        search_hi: t_hi,
        boundary: lhi - x_star <= 10.0 * xtol,
    })
}

/// Monte-Carlo estimate of the temperature-estimator variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Empirical variance of the per-trial estimates.
    pub variance: f64,
    /// Mean of the per-trial estimates.
    pub mean: f64,
    /// Trials whose inversion left the configured bracket.
    pub outliers: usize,
    /// Trials that entered the variance.
    pub trials_used: usize,
}

/// Simulate `trials` repetitions of `shots` projective measurements along
/// the optimal equatorial direction at the true temperature, invert the
/// outcome frequency locally for the maximum-likelihood estimate, and
/// return the empirical variance. Deterministic for a fixed seed; each
/// trial draws from its own counter-indexed stream so parallel replays
/// reproduce bit-identically.
#[allow(clippy::too_many_arguments)]
pub fn estimator_variance_mc(
    theta: f64,
    spec: &QubitSpec,
    sd: &SpectralDensity,
    temperature: f64,
    t: f64,
    shots: usize,
    trials: usize,
    seed: u64,
) -> Result<McEstimate, ThermometryError> {
    if shots < 100 || trials < 100 {
        return Err(ThermometryError::InvalidArgument(format!(
            "need shots >= 100 and trials >= 100, got {shots} and {trials}"
        )));
    }
    let tol = Tolerances::default();
    let st = theta.sin();
    if st.abs() < 1e-12 {
        return Err(ThermometryError::InvalidArgument(
            "theta = 0 carries no temperature information (F = 0)".into(),
        ));
    }
    let w0 = crate::qubit::omega0(spec)?;
    let w2 = w0 * w0;
    let gamma_of = |temp: f64| -> Result<f64, ThermometryError> {
        Ok(w2 * crate::bath::gamma_thermal_pair(sd, temp, t, &tol)?.0)
    };
    // aligned readout: p(T) = (1 + sin(theta) e^(-Gamma_eff(T)))/2
    let p_of_gamma = |g: f64| 0.5 * (1.0 + st * (-g).exp());
    let p_true = p_of_gamma(gamma_of(temperature)?);

    let bracket = 10.0_f64;
    let (t_lo, t_hi) = (temperature / bracket, temperature * bracket);
    let g_lo = gamma_of(t_lo)?;
    let g_hi = gamma_of(t_hi)?;

    let mut estimates = Vec::with_capacity(trials);
    let mut outliers = 0usize;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let mut plus = 0usize;
        for _ in 0..shots {
            if rng.gen::<f64>() < p_true {
                plus += 1;
            }
        }
        let p_hat = plus as f64 / shots as f64;
        let ratio = (2.0 * p_hat - 1.0) / st;
        if ratio <= 0.0 {
            outliers += 1;
            continue;
        }
        let g_target = -ratio.ln();
        if g_target < g_lo || g_target > g_hi {
            outliers += 1;
            continue;
        }
        // Gamma_eff is monotone in T: bisect
        let (mut lo, mut hi) = (t_lo, t_hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gamma_of(mid)? < g_target {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) < 1e-12 * temperature {
                break;
            }
        }
        estimates.push(0.5 * (lo + hi));
    }

    let n = estimates.len();
    if n < 2 {
        return Err(ThermometryError::InvalidArgument(
            "all trials fell outside the inversion bracket".into(),
        ));
    }
    let mean = estimates.iter().sum::<f64>() / n as f64;
    let variance =
        estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n as f64 - 1.0);
    Ok(McEstimate { variance, mean, outliers, trials_used: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_with, initial_state};
    use crate::qubit::SymmetryClass;
    use approx::assert_relative_eq;

    fn sd(j0: f64, s: f64, omega_c: f64) -> SpectralDensity {
        SpectralDensity::new(j0, s, omega_c).unwrap()
    }

    fn paper_spec(class: SymmetryClass) -> QubitSpec {
        QubitSpec::new(class, 1.0, 0.6, 0.6, 0.6)
    }

    #[test]
    fn qfi_zero_at_zero_theta_and_time() {
        let b = sd(1.0, 1.0, 1.0);
        let spec = paper_spec(SymmetryClass::Hermitian);
        assert_eq!(qfi_dephasing(0.0, &spec, &b, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(qfi_dephasing(FRAC_PI_2, &spec, &b, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn qfi_sin_squared_factorization() {
        let b = sd(1.0, 0.5, 1.0);
        let spec = paper_spec(SymmetryClass::PT);
        let base = qfi_dephasing(FRAC_PI_2, &spec, &b, 2.0, 0.7).unwrap();
        for k in 1..9 {
            let theta = k as f64 * std::f64::consts::PI / 9.0;
            let v = qfi_dephasing(theta, &spec, &b, 2.0, 0.7).unwrap();
            assert_relative_eq!(v, theta.sin().powi(2) * base, max_relative = 1e-12);
        }
    }

    #[test]
    fn qfi_general_classical_case() {
        // rho = diag(p, 1-p), drho = diag(p', -p') -> p'^2 / (p (1-p))
        let p = 0.3_f64;
        let dp = 0.05_f64;
        let rho = DensityMatrix::new(Complex2x2::diag(
            num_complex::Complex64::new(p, 0.0),
            num_complex::Complex64::new(1.0 - p, 0.0),
        ))
        .unwrap();
        let drho = Complex2x2::diag(
            num_complex::Complex64::new(dp, 0.0),
            num_complex::Complex64::new(-dp, 0.0),
        );
        let h = qfi_general(&rho, &drho).unwrap();
        assert_relative_eq!(h, dp * dp / (p * (1.0 - p)), max_relative = 1e-12);
    }

    #[test]
    fn qfi_general_zero_derivative() {
        let rho = initial_state(1.0, 0.0);
        let h = qfi_general(&rho, &Complex2x2::zero()).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn qfi_general_rejects_bad_derivative() {
        let rho = initial_state(1.0, 0.0);
        let bad = Complex2x2::diag(
            num_complex::Complex64::new(0.5, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
        );
        assert!(qfi_general(&rho, &bad).is_err());
    }

    #[test]
    fn qfi_oracle_agreement() {
        // Eq-35-style formula vs finite-difference state derivative
        let tol = Tolerances::default();
        for class in [SymmetryClass::Hermitian, SymmetryClass::PT, SymmetryClass::APT] {
            for s in [0.5, 1.0, 3.0] {
                let b = sd(1.0, s, 1.0);
                let spec = paper_spec(class);
                let (temp, t) = (1.0, 0.8);
                let analytic = qfi_dephasing(FRAC_PI_2, &spec, &b, temp, t).unwrap();
                let state0 = initial_state(FRAC_PI_2, 0.0);
                let h = 1e-5 * temp.max(1.0);
                let hi = evolve_with(&state0, &spec, &b, temp + h, t, &tol).unwrap();
                let lo = evolve_with(&state0, &spec, &b, temp - h, t, &tol).unwrap();
                let drho = (*hi.matrix() - *lo.matrix())
                    .scale(num_complex::Complex64::new(1.0 / (2.0 * h), 0.0));
                let rho = evolve_with(&state0, &spec, &b, temp, t, &tol).unwrap();
                let general = qfi_general(&rho, &drho).unwrap();
                assert_relative_eq!(analytic, general, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn projective_fisher_saturates_at_aligned_azimuth() {
        let b = sd(1.0, 1.0, 1.0);
        let spec = paper_spec(SymmetryClass::Hermitian);
        let (temp, t) = (1.0, 0.6);
        let h = qfi_dephasing(FRAC_PI_2, &spec, &b, temp, t).unwrap();
        // scan and refine the azimuth
        let f = |phi: f64| {
            fisher_info_projective(phi, FRAC_PI_2, &spec, &b, temp, t).unwrap()
        };
        let mut best = (0.0, f(0.0));
        for k in 1..360 {
            let phi = k as f64 * std::f64::consts::PI / 360.0;
            let v = f(phi);
            if v > best.1 {
                best = (phi, v);
            }
        }
        let span = std::f64::consts::PI / 360.0;
        let (_, fmax) = maximize_1d(f, best.0 - span, best.0 + span, 1e-12);
        assert_relative_eq!(fmax, h, max_relative = 1e-8);
        // and the orthogonal azimuth is blind
        let phi_star = rho_phase(&spec, &b, temp, t);
        let blind = f(phi_star + FRAC_PI_2);
        assert!(blind < 1e-10 * h.max(1.0));
        // theta = 0 sees nothing anywhere
        assert_eq!(
            fisher_info_projective(0.3, 0.0, &spec, &b, temp, t).unwrap(),
            0.0
        );
    }

    fn rho_phase(spec: &QubitSpec, b: &SpectralDensity, temp: f64, t: f64) -> f64 {
        let rho = evolve_with(
            &initial_state(FRAC_PI_2, 0.0),
            spec,
            b,
            temp,
            t,
            &Tolerances::default(),
        )
        .unwrap();
        let r = rho.bloch();
        r.y.atan2(r.x)
    }

    #[test]
    fn projective_never_exceeds_qfi() {
        let b = sd(1.0, 0.5, 1.0);
        let spec = paper_spec(SymmetryClass::APT);
        let (temp, t) = (2.0, 1.0);
        let h = qfi_dephasing(FRAC_PI_2, &spec, &b, temp, t).unwrap();
        for k in 0..36 {
            let phi = k as f64 * 2.0 * std::f64::consts::PI / 36.0;
            let f = fisher_info_projective(phi, FRAC_PI_2, &spec, &b, temp, t).unwrap();
            assert!(f <= h * (1.0 + 1e-10), "phi={phi}: F={f} > H={h}");
        }
    }

    #[test]
    fn qsnr_arithmetic() {
        assert_eq!(qsnr(2.0, 0.0625), 0.25);
        assert_eq!(qsnr(5.0, 0.0), 0.0);
        let p = EstimationPoint::new(2.0, 1.0, 0.0625);
        assert_relative_eq!(p.qsnr, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn optimal_time_interior_maximum() {
        let b = sd(1.0, 1.0, 1.0);
        let spec = paper_spec(SymmetryClass::Hermitian);
        let opt = optimal_time(&spec, &b, 1.0, 20.0).unwrap();
        assert!(opt.argument > 0.0 && opt.argument < 20.0);
        assert!(!opt.boundary);
        // dense brute force agreement
        let mut best = (0.0, 0.0);
        for i in 1..10_000 {
            let t = 20.0 * i as f64 / 9999.0;
            let v = qfi_dephasing(FRAC_PI_2, &spec, &b, 1.0, t).unwrap();
            if v > best.1 {
                best = (t, v);
            }
        }
        assert!((opt.argument - best.0).abs() < 1e-3, "{} vs {}", opt.argument, best.0);
        assert!(opt.value >= best.1 * (1.0 - 1e-9));
    }

    #[test]
    fn optimal_temperature_flat_surface_tie_break() {
        let b = sd(1.0, 1.0, 1.0);
        let spec = paper_spec(SymmetryClass::Hermitian);
        // theta = 0 makes the surface identically zero -> T_lo by tie-break
        let f = |x: f64| {
            qfi_dephasing(0.0, &spec, &b, x.exp(), 1.0).unwrap_or(f64::NEG_INFINITY)
        };
        let (x, v) = maximize_1d(f, 0.05_f64.ln(), 50.0_f64.ln(), 1e-10);
        assert_relative_eq!(x.exp(), 0.05, max_relative = 1e-9);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn optimal_temperature_interior() {
        let b = sd(1.0, 1.0, 1.0);
        let spec = paper_spec(SymmetryClass::Hermitian);
        let opt = optimal_temperature(&spec, &b, 1.0, 0.05, 50.0).unwrap();
        assert!(opt.argument > 0.05 && opt.argument < 50.0);
        assert!(!opt.boundary);
    }

    #[test]
    fn estimator_is_deterministic_and_efficient() {
        let b = sd(1.0, 1.0, 1.0);
        let spec = paper_spec(SymmetryClass::Hermitian);
        let t_opt = optimal_time(&spec, &b, 1.0, 20.0).unwrap().argument;
        let r1 = estimator_variance_mc(FRAC_PI_2, &spec, &b, 1.0, t_opt, 2000, 200, 42).unwrap();
        let r2 = estimator_variance_mc(FRAC_PI_2, &spec, &b, 1.0, t_opt, 2000, 200, 42).unwrap();
        assert_eq!(r1.variance.to_bits(), r2.variance.to_bits());
        assert_eq!(r1.outliers, r2.outliers);

        let f = qfi_dephasing(FRAC_PI_2, &spec, &b, 1.0, t_opt).unwrap();
        let ratio = r1.variance * 2000.0 * f;
        assert!((0.8..1.4).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn estimator_rejects_uninformative_theta() {
        let b = sd(1.0, 1.0, 1.0);
        let spec = paper_spec(SymmetryClass::Hermitian);
        assert!(estimator_variance_mc(0.0, &spec, &b, 1.0, 1.0, 500, 100, 1).is_err());
    }
}
