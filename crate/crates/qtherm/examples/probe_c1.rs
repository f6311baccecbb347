use num_complex::Complex64;
use qtherm::bath::{dgamma_dtemperature, gamma_thermal, SpectralDensity};
use qtherm::dynamics::{evolve_with, initial_state};
use qtherm::qubit::{QubitSpec, SymmetryClass};
use qtherm::thermometry::{qfi_dephasing, qfi_general};
use qtherm::Tolerances;
use std::f64::consts::FRAC_PI_2;

fn main() {
    let tol = Tolerances::default();
    let b = SpectralDensity::new(1.0, 3.0, 1.0).unwrap();
    let spec = QubitSpec::new(SymmetryClass::Hermitian, 1.0, 0.6, 0.6, 0.6);
    let (temp, t) = (10.0, 5.0);
    let g = gamma_thermal(&b, temp, t, 1e-10).unwrap();
    let dg = dgamma_dtemperature(&b, temp, t, 1e-10).unwrap();
    println!("Gamma = {g:.15e}, dGamma = {dg:.15e}");
    let ge = 1.72 * g;
    let de = 1.72 * dg;
    println!("analytic drho01 = {:.15e}", -de * 0.5 * (-ge).exp());
    let state0 = initial_state(FRAC_PI_2, 0.0);
    let h = 1e-4;
    for hh in [h, h / 2.0, h / 8.0] {
        let hi = evolve_with(&state0, &spec, &b, temp + hh, t, &tol).unwrap();
        let lo = evolve_with(&state0, &spec, &b, temp - hh, t, &tol).unwrap();
        let d01 = (hi.matrix()[(0, 1)] - lo.matrix()[(0, 1)]) * Complex64::new(0.5 / hh, 0.0);
        println!("h={hh:.1e}: fd drho01 = {:+.10e} {:+.10e}i |.|={:.10e}", d01.re, d01.im, d01.norm());
        // gamma fd directly
        let gp = gamma_thermal(&b, temp + hh, t, 1e-10).unwrap();
        let gm = gamma_thermal(&b, temp - hh, t, 1e-10).unwrap();
        println!("        fd dGamma = {:.12e} (analytic {:.12e})", (gp - gm) / (2.0 * hh), dg);
    }
    let analytic = qfi_dephasing(FRAC_PI_2, &spec, &b, temp, t).unwrap();
    println!("analytic H = {analytic:.12e}");
    let diff_at = |hh: f64| {
        let hi = evolve_with(&state0, &spec, &b, temp + hh, t, &tol).unwrap();
        let lo = evolve_with(&state0, &spec, &b, temp - hh, t, &tol).unwrap();
        (*hi.matrix() - *lo.matrix()).scale(Complex64::new(0.5 / hh, 0.0))
    };
    let coarse = diff_at(h);
    let fine = diff_at(0.5 * h);
    let drho = (fine.scale(Complex64::new(4.0, 0.0)) - coarse).scale(Complex64::new(1.0 / 3.0, 0.0));
    let rho = evolve_with(&state0, &spec, &b, temp, t, &tol).unwrap();
    let general = qfi_general(&rho, &drho).unwrap();
    println!("general H  = {general:.12e}  rel dev {:.3e}", (general / analytic - 1.0).abs());
}
