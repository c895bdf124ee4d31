//! Two-qubit entanglement: Wootters concurrence and the X-state shortcut.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{check_density, real, ComplexMatrix};

/// Off-X entries below this magnitude are treated as zero.
pub const X_FORM_TOL: f64 = 1e-10;

/// Two-qubit density matrix with support only on the diagonal and
/// anti-diagonal:
///
/// ```text
/// | a  0  0  f |
/// | 0  b  e  0 |
/// | 0  e* c  0 |
/// | f* 0  0  d |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: Complex64,
    pub f: Complex64,
}

impl XState {
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = real(self.a);
        m[(1, 1)] = real(self.b);
        m[(2, 2)] = real(self.c);
        m[(3, 3)] = real(self.d);
        m[(1, 2)] = self.e;
        m[(2, 1)] = self.e.conj();
        m[(0, 3)] = self.f;
        m[(3, 0)] = self.f.conj();
        m
    }

    /// Reads the X-layout entries of `rho`, or `None` when any other entry
    /// exceeds `tol` in magnitude.
    pub fn from_matrix(rho: &ComplexMatrix, tol: f64) -> Option<Self> {
        if rho.shape() != (4, 4) {
            return None;
        }
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || i + j == 3;
                if !on_x && rho[(i, j)].norm() >= tol {
                    return None;
                }
            }
        }
        Some(Self {
            a: rho[(0, 0)].re,
            b: rho[(1, 1)].re,
            c: rho[(2, 2)].re,
            d: rho[(3, 3)].re,
            e: rho[(1, 2)],
            f: rho[(0, 3)],
        })
    }

    pub fn trace(&self) -> f64 {
        self.a + self.b + self.c + self.d
    }
}

/// Closed-form concurrence of an X-state: `2 max(0, |f| - √(bc), |e| - √(ad))`.
pub fn concurrence_x(x: &XState) -> f64 {
    let outer = x.f.norm() - (x.b.max(0.0) * x.c.max(0.0)).sqrt();
    let inner = x.e.norm() - (x.a.max(0.0) * x.d.max(0.0)).sqrt();
    (2.0 * outer.max(inner).max(0.0)).min(1.0)
}

/// `σy ⊗ σy`, which is real in the `(e, g)` basis.
fn spin_flip() -> ComplexMatrix {
    let mut y = ComplexMatrix::zeros(4, 4);
    y[(0, 3)] = real(-1.0);
    y[(1, 2)] = real(1.0);
    y[(2, 1)] = real(1.0);
    y[(3, 0)] = real(-1.0);
    y
}

/// Wootters concurrence of a general two-qubit density matrix.
///
/// With `ρ = W W†` (`W = V √Λ` from the Hermitian eigendecomposition, negative
/// round-off eigenvalues clamped to zero), the square roots of the eigenvalues
/// of `ρ (σy⊗σy) ρ* (σy⊗σy)` are the singular values of `Wᵀ (σy⊗σy) W`.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    if rho.shape() != (4, 4) {
        return Err(Error::invalid(format!("concurrence needs a 4x4 matrix, got {}x{}", rho.nrows(), rho.ncols())));
    }
    check_density(rho, 1e-9, 1e-9, 1e-9)?;
    let herm = (rho + rho.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(herm);
    let mut w = eig.eigenvectors;
    for (j, mut col) in w.column_iter_mut().enumerate() {
        col *= real(eig.eigenvalues[j].max(0.0).sqrt());
    }
    let t = w.transpose() * spin_flip() * &w;
    let mut sv: Vec<f64> = t.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let value = sv[0] - sv[1] - sv[2] - sv[3];
    Ok(value.clamp(0.0, 1.0))
}

/// Concurrence using the X-state formula when `rho` has X form to
/// [`X_FORM_TOL`], and the general routine otherwise.
pub fn concurrence_auto(rho: &ComplexMatrix) -> Result<f64> {
    match XState::from_matrix(rho, X_FORM_TOL) {
        Some(x) => {
            check_density(rho, 1e-9, 1e-9, 1e-9)?;
            Ok(concurrence_x(&x))
        }
        None => concurrence(rho),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{basis, identity, kron_vec, projector, EXCITED, GROUND};

    fn x(a: f64, b: f64, c_: f64, d: f64, e: f64, f: f64) -> XState {
        XState { a, b, c: c_, d, e: real(e), f: real(f) }
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let s = 0.5f64.sqrt();
        let psi = kron_vec(&basis(2, EXCITED), &basis(2, EXCITED)) * real(s)
            + kron_vec(&basis(2, GROUND), &basis(2, GROUND)) * real(s);
        assert!((concurrence(&projector(&psi)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_separable() {
        let rho = identity(4).map(|z| z * 0.25);
        assert_eq!(concurrence(&rho).unwrap(), 0.0);
    }

    #[test]
    fn partially_entangled_pure_state() {
        let alpha = 30f64.to_radians();
        let psi = kron_vec(&basis(2, EXCITED), &basis(2, EXCITED)) * real(alpha.cos())
            + kron_vec(&basis(2, GROUND), &basis(2, GROUND)) * real(alpha.sin());
        let expected = 3f64.sqrt() / 2.0;
        assert!((concurrence(&projector(&psi)).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn x_state_examples() {
        assert!((concurrence_x(&x(0.5, 0.0, 0.0, 0.5, 0.0, 0.5)) - 1.0).abs() < 1e-15);
        assert_eq!(concurrence_x(&x(0.0, 0.5, 0.5, 0.0, 0.0, 0.0)), 0.0);
        let s = x(0.4, 0.15, 0.15, 0.3, 0.0, 0.25);
        assert!((concurrence_x(&s) - 0.2).abs() < 1e-15);
        assert!((concurrence(&s.to_matrix()).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn phases_do_not_change_concurrence() {
        let base =
            XState { a: 0.3, b: 0.2, c: 0.1, d: 0.4, e: Complex64::new(0.05, 0.1), f: Complex64::new(0.2, -0.1) };
        let c0 = concurrence_x(&base);
        let g0 = concurrence(&base.to_matrix()).unwrap();
        for theta in [0.3, 1.7, 4.0] {
            let rot = Complex64::from_polar(1.0, theta);
            let turned = XState { e: base.e * rot, f: base.f * rot.conj(), ..base };
            assert!((concurrence_x(&turned) - c0).abs() < 1e-15);
            assert!((concurrence(&turned.to_matrix()).unwrap() - g0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_density_input() {
        assert!(concurrence(&identity(4)).is_err());
        assert!(concurrence(&identity(2).map(|z| z * 0.5)).is_err());
    }

    #[test]
    fn detects_x_form() {
        let mut m = x(0.25, 0.25, 0.25, 0.25, 0.1, 0.0).to_matrix();
        assert!(XState::from_matrix(&m, X_FORM_TOL).is_some());
        m[(0, 1)] = real(0.01);
        m[(1, 0)] = real(0.01);
        assert!(XState::from_matrix(&m, X_FORM_TOL).is_none());
        let general = concurrence(&m).unwrap();
        assert_eq!(concurrence_auto(&m).unwrap(), general);
    }
}
