//! 2x2 complex matrices and the closed-form Hermitian eigenproblem.

use super::NumericsError;
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Row-major 2x2 complex matrix.
///
/// Small enough to live on the stack and be `Copy`; all the operators the
/// probe model needs (Hamiltonians, similarity transforms, dynamical maps,
/// density matrices) are instances of this type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2 {
    pub e: [Complex64; 4],
}

impl Complex2x2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { e: [a, b, c, d] }
    }

    pub fn from_rows(r0: [Complex64; 2], r1: [Complex64; 2]) -> Self {
        Self::new(r0[0], r0[1], r1[0], r1[1])
    }

    pub fn zero() -> Self {
        Self { e: [Complex64::ZERO; 4] }
    }

    pub fn identity() -> Self {
        Self::new(Complex64::ONE, Complex64::ZERO, Complex64::ZERO, Complex64::ONE)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, Complex64::ZERO, Complex64::ZERO, d)
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0] + self.e[3]
    }

    pub fn det(&self) -> Complex64 {
        self.e[0] * self.e[3] - self.e[1] * self.e[2]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.e[0].conj(),
            self.e[2].conj(),
            self.e[1].conj(),
            self.e[3].conj(),
        )
    }

    pub fn inverse(&self) -> Result<Self, NumericsError> {
        let d = self.det();
        if d.norm() < 1e-12 {
            return Err(NumericsError::SingularMatrix(d.norm()));
        }
        Ok(Self::new(self.e[3] / d, -self.e[1] / d, -self.e[2] / d, self.e[0] / d))
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { e: [self.e[0] * k, self.e[1] * k, self.e[2] * k, self.e[3] * k] }
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self {
            e: [
                self.e[0] * other.e[0],
                self.e[1] * other.e[1],
                self.e[2] * other.e[2],
                self.e[3] * other.e[3],
            ],
        }
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.e[0] * v[0] + self.e[1] * v[1],
            self.e[2] * v[0] + self.e[3] * v[1],
        ]
    }

    /// max |entry - entry'| against another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.e
            .iter()
            .zip(other.e.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from Hermiticity: max |m - m^dagger| entrywise.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn max_norm(&self) -> f64 {
        self.e.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for Complex2x2 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.e[2 * i + j]
    }
}

impl IndexMut<(usize, usize)> for Complex2x2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.e[2 * i + j]
    }
}

impl Add for Complex2x2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            e: [
                self.e[0] + o.e[0],
                self.e[1] + o.e[1],
                self.e[2] + o.e[2],
                self.e[3] + o.e[3],
            ],
        }
    }
}

impl Sub for Complex2x2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            e: [
                self.e[0] - o.e[0],
                self.e[1] - o.e[1],
                self.e[2] - o.e[2],
                self.e[3] - o.e[3],
            ],
        }
    }
}

impl Neg for Complex2x2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for Complex2x2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.e[0] * o.e[0] + self.e[1] * o.e[2],
            self.e[0] * o.e[1] + self.e[1] * o.e[3],
            self.e[2] * o.e[0] + self.e[3] * o.e[2],
            self.e[2] * o.e[1] + self.e[3] * o.e[3],
        )
    }
}

/// Closed-form eigendecomposition of a Hermitian 2x2 matrix.
///
/// Returns eigenvalues in ascending order with orthonormal eigenvectors
/// (columns paired with the eigenvalues). The input must be Hermitian to
/// within 1e-12 entrywise.
pub fn eig_hermitian_2x2(
    m: &Complex2x2,
) -> Result<([f64; 2], [[Complex64; 2]; 2]), NumericsError> {
    let res = m.hermiticity_residual();
    if res > 1e-12 {
        return Err(NumericsError::NotHermitian(res));
    }
    let a = m.e[0].re;
    let d = m.e[3].re;
    let b = (m.e[1] + m.e[2].conj()) * 0.5; // symmetrized off-diagonal

    let half_tr = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let lo = half_tr - half_gap;
    let hi = half_tr + half_gap;

    if b.norm() < 1e-15 * (1.0 + a.abs().max(d.abs())) {
        // already diagonal; order the basis vectors by eigenvalue
        let (vals, vecs) = if a <= d {
            ([a, d], [[Complex64::ONE, Complex64::ZERO], [Complex64::ZERO, Complex64::ONE]])
        } else {
            ([d, a], [[Complex64::ZERO, Complex64::ONE], [Complex64::ONE, Complex64::ZERO]])
        };
        return Ok((vals, vecs));
    }

    // v = (b, lambda - a), normalized; orthogonal partner for the other root
    let mk = |lambda: f64| -> [Complex64; 2] {
        let v0 = b;
        let v1 = Complex64::new(lambda - a, 0.0);
        let n = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        [v0 / n, v1 / n]
    };
    Ok(([lo, hi], [mk(lo), mk(hi)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn maximally_mixed() {
        let m = Complex2x2::diag(c(0.5, 0.0), c(0.5, 0.0));
        let (vals, _) = eig_hermitian_2x2(&m).unwrap();
        assert_relative_eq!(vals[0], 0.5);
        assert_relative_eq!(vals[1], 0.5);
    }

    #[test]
    fn diagonal_case_orders_ascending() {
        let m = Complex2x2::diag(c(0.8, 0.0), c(0.2, 0.0));
        let (vals, vecs) = eig_hermitian_2x2(&m).unwrap();
        assert_relative_eq!(vals[0], 0.2);
        assert_relative_eq!(vals[1], 0.8);
        assert_relative_eq!(vecs[0][1].re, 1.0); // lowest eigenvalue ties to |1>
        assert_relative_eq!(vecs[1][0].re, 1.0);
    }

    #[test]
    fn pure_state_spectrum() {
        // |+><+| has eigenvalues (0, 1)
        let h = c(0.5, 0.0);
        let m = Complex2x2::new(h, h, h, h);
        let (vals, _) = eig_hermitian_2x2(&m).unwrap();
        assert_relative_eq!(vals[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let m = Complex2x2::new(c(0.6, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.4, 0.0));
        let (vals, vecs) = eig_hermitian_2x2(&m).unwrap();
        // orthonormal
        let dot = vecs[0][0].conj() * vecs[1][0] + vecs[0][1].conj() * vecs[1][1];
        assert!(dot.norm() < 1e-12);
        // m = sum lambda_i v_i v_i^dagger
        let mut rec = Complex2x2::zero();
        for k in 0..2 {
            let v = vecs[k];
            let proj = Complex2x2::new(
                v[0] * v[0].conj(),
                v[0] * v[1].conj(),
                v[1] * v[0].conj(),
                v[1] * v[1].conj(),
            );
            rec = rec + proj.scale(c(vals[k], 0.0));
        }
        assert!(rec.max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Complex2x2::new(c(1.0, 0.0), c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0));
        assert!(eig_hermitian_2x2(&m).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Complex2x2::new(c(1.0, 0.2), c(0.3, -0.4), c(0.0, 1.0), c(2.0, 0.0));
        let inv = m.inverse().unwrap();
        assert!((m * inv).max_abs_diff(&Complex2x2::identity()) < 1e-13);
    }
}
