//! Probe Hamiltonians for the three symmetry classes and their
//! (bi)orthonormal eigensystems.
//!
//! All three classes share the block structure H = m I + [[p, q], [q~, -p]],
//! which the similarity transform T = [[w - p, -q], [w + p, q]] with
//! w = sqrt(p^2 + q q~) brings to diag(m - w, m + w). The classes differ in
//! which slot carries the imaginary unit:
//!
//!   Hermitian:  m = d,  p = a,   q = c + ib, q~ = conj(q)
//!   PT:         m = a,  p = id,  q = c + ib, q~ = conj(q)
//!   anti-PT:    m = id, p = a,   q = c + ib, q~ = -conj(q)
//!
//! The combined frequency omega0 that weights decoherence and the phase is
//! a separate, class-specific expression (see [`omega0`]); for the PT class
//! it does not coincide with half the spectral gap unless c = d, which is
//! why specs with c != d carry a warning.

use crate::numerics::Complex2x2;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum QubitError {
    #[error("broken {class:?} symmetry: {constraint} fails ({detail})")]
    BrokenSymmetry { class: SymmetryClass, constraint: &'static str, detail: String },
    #[error("similarity transform is singular (|det| = {0:.3e})")]
    SingularTransform(f64),
}

/// The three probe symmetry classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    Hermitian,
    PT,
    APT,
}

impl SymmetryClass {
    pub fn label(&self) -> &'static str {
        match self {
            SymmetryClass::Hermitian => "hermitian",
            SymmetryClass::PT => "pt",
            SymmetryClass::APT => "apt",
        }
    }
}

/// Probe parameters: symmetry class, the four real Hamiltonian entries and
/// the coupling phase prefactor entering the phase integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSpec {
    pub class: SymmetryClass,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub theta_g: f64,
}

impl QubitSpec {
    pub fn new(class: SymmetryClass, a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { class, a, b, c, d, theta_g: 1.0 }
    }

    pub fn with_theta_g(mut self, theta_g: f64) -> Self {
        self.theta_g = theta_g;
        self
    }

    /// Hard domain checks; broken-symmetry parameters are rejected with the
    /// violated inequality spelled out.
    pub fn validate(&self) -> Result<(), QubitError> {
        let radicand = self.omega0_squared();
        if radicand > 0.0 {
            if self.class == SymmetryClass::PT {
                let gap = self.b * self.b + self.c * self.c - self.d * self.d;
                if gap < 0.0 {
                    return Err(QubitError::BrokenSymmetry {
                        class: self.class,
                        constraint: "b^2 + c^2 >= d^2",
                        detail: format!(
                            "b^2 + c^2 = {}, d^2 = {}",
                            self.b * self.b + self.c * self.c,
                            self.d * self.d
                        ),
                    });
                }
            }
            return Ok(());
        }
        let (constraint, detail) = match self.class {
            SymmetryClass::Hermitian => (
                "a^2 + b^2 + c^2 > 0",
                format!("a={}, b={}, c={}", self.a, self.b, self.c),
            ),
            SymmetryClass::PT => (
                "a^2 + b^2 > d^2",
                format!(
                    "a^2 + b^2 = {}, d^2 = {}",
                    self.a * self.a + self.b * self.b,
                    self.d * self.d
                ),
            ),
            SymmetryClass::APT => (
                "a^2 > b^2 + c^2",
                format!(
                    "a^2 = {}, b^2 + c^2 = {}",
                    self.a * self.a,
                    self.b * self.b + self.c * self.c
                ),
            ),
        };
        Err(QubitError::BrokenSymmetry { class: self.class, constraint, detail })
    }

    /// Non-fatal parameter advisories.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.class == SymmetryClass::PT && (self.c - self.d).abs() > 1e-12 {
            w.push(format!(
                "PT probe with c = {} != d = {}: the combined frequency formula \
                 sqrt(a^2 + b^2 - d^2) assumes the c = d reduction",
                self.c, self.d
            ));
        }
        w
    }

    fn omega0_squared(&self) -> f64 {
        let (a2, b2, c2, d2) = (
            self.a * self.a,
            self.b * self.b,
            self.c * self.c,
            self.d * self.d,
        );
        match self.class {
            SymmetryClass::Hermitian => a2 + b2 + c2,
            SymmetryClass::PT => a2 + b2 - d2,
            SymmetryClass::APT => a2 - b2 - c2,
        }
    }

    /// Template slots (m, p, q, q~) of H = m I + [[p, q], [q~, -p]].
    fn block_form(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        let q = Complex64::new(self.c, self.b);
        match self.class {
            SymmetryClass::Hermitian => (
                Complex64::new(self.d, 0.0),
                Complex64::new(self.a, 0.0),
                q,
                q.conj(),
            ),
            SymmetryClass::PT => (
                Complex64::new(self.a, 0.0),
                Complex64::new(0.0, self.d),
                q,
                q.conj(),
            ),
            SymmetryClass::APT => (
                Complex64::new(0.0, self.d),
                Complex64::new(self.a, 0.0),
                q,
                -q.conj(),
            ),
        }
    }
}

/// Combined qubit frequency omega0 for the class:
/// sqrt(a^2+b^2+c^2) | sqrt(a^2+b^2-d^2) | sqrt(a^2-b^2-c^2).
pub fn omega0(spec: &QubitSpec) -> Result<f64, QubitError> {
    spec.validate()?;
    Ok(spec.omega0_squared().sqrt())
}

/// The probe Hamiltonian as printed for the class.
pub fn hamiltonian(spec: &QubitSpec) -> Complex2x2 {
    let (m, p, q, qt) = spec.block_form();
    Complex2x2::new(m + p, q, qt, m - p)
}

/// Half the spectral gap, sqrt(p^2 + q q~); coincides with omega0 for the
/// Hermitian and anti-PT classes.
fn gap_frequency(spec: &QubitSpec) -> Result<Complex64, QubitError> {
    spec.validate()?;
    let (_, p, q, qt) = spec.block_form();
    let w2 = p * p + q * qt;
    // unbroken regimes have w2 real positive
    if w2.re <= 0.0 || w2.im.abs() > 1e-12 * (1.0 + w2.re.abs()) {
        return Err(QubitError::BrokenSymmetry {
            class: spec.class,
            constraint: "real spectral gap",
            detail: format!("gap^2 = {w2}"),
        });
    }
    Ok(Complex64::new(w2.re.sqrt(), 0.0))
}

/// Similarity transform T with T H T^-1 = diag(E_-, E_+).
///
/// Rows are the left eigenvectors; energies come out ascending by real
/// part, which is the ordering the dephasing frame assumes.
pub fn similarity_transform(spec: &QubitSpec) -> Result<Complex2x2, QubitError> {
    let (_, p, q, _) = spec.block_form();
    let w = gap_frequency(spec)?;
    if q.norm() < 1e-14 {
        // already diagonal; pick the row order that keeps E_- first
        return Ok(if p.re > 0.0 {
            Complex2x2::new(
                Complex64::ZERO,
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
            )
        } else {
            Complex2x2::identity()
        });
    }
    let t = Complex2x2::new(w - p, -q, w + p, q);
    let det = t.det().norm();
    if det < 1e-12 {
        return Err(QubitError::SingularTransform(det));
    }
    Ok(t)
}

/// Biorthonormal eigensystem of the probe Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct EigenSystem {
    pub e_plus: Complex64,
    pub e_minus: Complex64,
    /// Right eigenvectors |psi^R>, columns of T^-1.
    pub right_plus: [Complex64; 2],
    pub right_minus: [Complex64; 2],
    /// Left eigenvectors <psi^L|, rows of T.
    pub left_plus: [Complex64; 2],
    pub left_minus: [Complex64; 2],
    /// Real spectral gap E_+ - E_-.
    pub gap: f64,
}

/// Eigensystem through the similarity transform: |psi_n^R> = T^-1 |n>,
/// <psi_n^L| = <n| T, biorthonormal by construction.
pub fn eigensystem(spec: &QubitSpec) -> Result<EigenSystem, QubitError> {
    let (m, _, _, _) = spec.block_form();
    let w = gap_frequency(spec)?;
    let t = similarity_transform(spec)?;
    let tinv = t.inverse().map_err(|_| QubitError::SingularTransform(t.det().norm()))?;
    Ok(EigenSystem {
        e_plus: m + w,
        e_minus: m - w,
        right_plus: [tinv[(0, 1)], tinv[(1, 1)]],
        right_minus: [tinv[(0, 0)], tinv[(1, 0)]],
        left_plus: [t[(1, 0)], t[(1, 1)]],
        left_minus: [t[(0, 0)], t[(0, 1)]],
        gap: 2.0 * w.re,
    })
}

impl EigenSystem {
    fn outer(r: [Complex64; 2], l: [Complex64; 2]) -> Complex2x2 {
        Complex2x2::new(r[0] * l[0], r[0] * l[1], r[1] * l[0], r[1] * l[1])
    }

    /// Reconstruct sum_n E_n |psi_n^R><psi_n^L|.
    pub fn reconstruct(&self) -> Complex2x2 {
        Self::outer(self.right_plus, self.left_plus).scale(self.e_plus)
            + Self::outer(self.right_minus, self.left_minus).scale(self.e_minus)
    }

    /// sum_n |psi_n^R><psi_n^L|, the completeness check.
    pub fn completeness(&self) -> Complex2x2 {
        Self::outer(self.right_plus, self.left_plus)
            + Self::outer(self.right_minus, self.left_minus)
    }

    /// <psi_n^L | psi_m^R> for n, m in {plus, minus}.
    pub fn biorthogonality(&self) -> [[Complex64; 2]; 2] {
        let dot = |l: [Complex64; 2], r: [Complex64; 2]| l[0] * r[0] + l[1] * r[1];
        [
            [dot(self.left_plus, self.right_plus), dot(self.left_plus, self.right_minus)],
            [dot(self.left_minus, self.right_plus), dot(self.left_minus, self.right_minus)],
        ]
    }
}

/// Numerical check of the algebra expected from the class: Hermiticity,
/// commutation (PT) or anticommutation (anti-PT) with the combined
/// parity-conjugation operation, P = sigma_x with complex conjugation.
pub fn symmetry_residual(spec: &QubitSpec) -> f64 {
    let h = hamiltonian(spec);
    let conj = Complex2x2::new(h.e[0].conj(), h.e[1].conj(), h.e[2].conj(), h.e[3].conj());
    let sx = Complex2x2::new(
        Complex64::ZERO,
        Complex64::ONE,
        Complex64::ONE,
        Complex64::ZERO,
    );
    let pt_h = sx * conj * sx;
    match spec.class {
        SymmetryClass::Hermitian => h.hermiticity_residual(),
        SymmetryClass::PT => pt_h.max_abs_diff(&h),
        SymmetryClass::APT => pt_h.max_abs_diff(&-h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C;

    fn paper_spec(class: SymmetryClass) -> QubitSpec {
        QubitSpec::new(class, 1.0, 0.6, 0.6, 0.6)
    }

    #[test]
    fn omega0_values_at_reference_parameters() {
        assert_relative_eq!(
            omega0(&QubitSpec::new(SymmetryClass::Hermitian, 1.0, 0.6, 0.6, 0.0)).unwrap(),
            1.72_f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            omega0(&paper_spec(SymmetryClass::APT)).unwrap(),
            0.28_f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            omega0(&paper_spec(SymmetryClass::PT)).unwrap(),
            1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn omega0_ordering_hermitian_pt_apt() {
        let h = omega0(&paper_spec(SymmetryClass::Hermitian)).unwrap();
        let pt = omega0(&paper_spec(SymmetryClass::PT)).unwrap();
        let apt = omega0(&paper_spec(SymmetryClass::APT)).unwrap();
        assert!(h > pt && pt > apt);
        assert_relative_eq!(h, 1.72_f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn broken_symmetry_rejected() {
        let bad = QubitSpec::new(SymmetryClass::APT, 0.5, 0.6, 0.6, 0.6);
        let err = omega0(&bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("a^2 > b^2 + c^2"), "missing inequality in: {msg}");
    }

    #[test]
    fn pt_c_ne_d_warns() {
        let spec = QubitSpec::new(SymmetryClass::PT, 1.0, 0.6, 0.3, 0.2);
        assert!(!spec.warnings().is_empty());
        assert!(paper_spec(SymmetryClass::PT).warnings().is_empty());
    }

    #[test]
    fn hamiltonian_matrices_as_printed() {
        let h = hamiltonian(&QubitSpec::new(SymmetryClass::Hermitian, 1.0, 0.0, 0.0, 0.0));
        assert!(h.max_abs_diff(&Complex2x2::diag(C::new(1.0, 0.0), C::new(-1.0, 0.0))) < 1e-15);

        let sx = hamiltonian(&QubitSpec::new(SymmetryClass::PT, 0.0, 0.0, 1.0, 0.0));
        assert!(sx.max_abs_diff(&Complex2x2::new(C::ZERO, C::ONE, C::ONE, C::ZERO)) < 1e-15);

        // APT trace = 2 i d
        let apt = hamiltonian(&paper_spec(SymmetryClass::APT));
        let tr = apt.trace();
        assert_relative_eq!(tr.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(tr.im, 1.2, max_relative = 1e-14);
    }

    #[test]
    fn class_symmetry_algebra_holds() {
        for class in [SymmetryClass::Hermitian, SymmetryClass::PT, SymmetryClass::APT] {
            assert!(symmetry_residual(&paper_spec(class)) < 1e-14, "{class:?}");
        }
    }

    fn offdiag_residual(spec: &QubitSpec) -> f64 {
        let t = similarity_transform(spec).unwrap();
        let d = t * hamiltonian(spec) * t.inverse().unwrap();
        d[(0, 1)].norm().max(d[(1, 0)].norm())
    }

    #[test]
    fn similarity_diagonalizes_all_classes() {
        for class in [SymmetryClass::Hermitian, SymmetryClass::PT, SymmetryClass::APT] {
            assert!(offdiag_residual(&paper_spec(class)) < 1e-10, "{class:?}");
        }
        // trivial diagonal case, E_- first
        let diag = QubitSpec::new(SymmetryClass::Hermitian, 1.0, 0.0, 0.0, 0.0);
        assert!(offdiag_residual(&diag) < 1e-15);
        let t = similarity_transform(&diag).unwrap();
        let d = t * hamiltonian(&diag) * t.inverse().unwrap();
        assert_relative_eq!(d[(0, 0)].re, -1.0, max_relative = 1e-14);
        assert_relative_eq!(d[(1, 1)].re, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn apt_diagonal_frame_energies() {
        let spec = paper_spec(SymmetryClass::APT);
        let t = similarity_transform(&spec).unwrap();
        let d = t * hamiltonian(&spec) * t.inverse().unwrap();
        let w0 = omega0(&spec).unwrap();
        // {E_-, E_+} = {id - w0, id + w0}, ascending real part
        assert_relative_eq!(d[(0, 0)].im, 0.6, max_relative = 1e-12);
        assert_relative_eq!(d[(1, 1)].im, 0.6, max_relative = 1e-12);
        assert_relative_eq!(d[(0, 0)].re, -w0, max_relative = 1e-12);
        assert_relative_eq!(d[(1, 1)].re, w0, max_relative = 1e-12);
    }

    #[test]
    fn eigensystem_reconstructs_hamiltonian() {
        for class in [SymmetryClass::Hermitian, SymmetryClass::PT, SymmetryClass::APT] {
            let spec = paper_spec(class);
            let es = eigensystem(&spec).unwrap();
            assert!(es.reconstruct().max_abs_diff(&hamiltonian(&spec)) < 1e-10);
            assert!(es.completeness().max_abs_diff(&Complex2x2::identity()) < 1e-10);
            let bi = es.biorthogonality();
            assert!((bi[0][0] - C::ONE).norm() < 1e-10);
            assert!((bi[1][1] - C::ONE).norm() < 1e-10);
            assert!(bi[0][1].norm() < 1e-10);
            assert!(bi[1][0].norm() < 1e-10);
        }
    }

    #[test]
    fn apt_eigenvalues() {
        let es = eigensystem(&paper_spec(SymmetryClass::APT)).unwrap();
        let w0 = 0.28_f64.sqrt();
        assert_relative_eq!(es.e_plus.re, w0, max_relative = 1e-13);
        assert_relative_eq!(es.e_plus.im, 0.6, max_relative = 1e-13);
        assert_relative_eq!(es.e_minus.re, -w0, max_relative = 1e-13);
        assert_relative_eq!(es.e_minus.im, 0.6, max_relative = 1e-13);
        assert_relative_eq!(es.gap, 2.0 * w0, max_relative = 1e-13);
    }

    #[test]
    fn pt_eigenvalues_real_in_unbroken_domain() {
        let es = eigensystem(&paper_spec(SymmetryClass::PT)).unwrap();
        assert!(es.e_plus.im.abs() < 1e-12);
        assert!(es.e_minus.im.abs() < 1e-12);
    }

    #[test]
    fn hermitian_left_right_coincide_up_to_scale() {
        let es = eigensystem(&paper_spec(SymmetryClass::Hermitian)).unwrap();
        for (l, r) in [(es.left_plus, es.right_plus), (es.left_minus, es.right_minus)] {
            let lk = [l[0].conj(), l[1].conj()];
            let cross = lk[0] * r[1] - lk[1] * r[0];
            assert!(cross.norm() < 1e-12);
        }
    }

    #[test]
    fn random_in_domain_specs_complete() {
        // light deterministic sweep across the three classes
        let mut k = 0u32;
        let mut lcg = 12345u64;
        let mut rng = || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (lcg >> 33) as f64 / (1u64 << 31) as f64 - 1.0
        };
        while k < 50 {
            let (a, b, c) = (1.0 + rng().abs() * 2.0, rng() * 0.5, rng() * 0.5);
            let class = match k % 3 {
                0 => SymmetryClass::Hermitian,
                1 => SymmetryClass::PT,
                _ => SymmetryClass::APT,
            };
            let spec = QubitSpec::new(class, a, b, c, c);
            if spec.validate().is_err() {
                continue;
            }
            let es = eigensystem(&spec).unwrap();
            assert!(es.completeness().max_abs_diff(&Complex2x2::identity()) < 1e-10);
            k += 1;
        }
    }
}
