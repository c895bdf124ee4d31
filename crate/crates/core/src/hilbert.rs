//! Dense complex linear algebra and truncated Fock-space building blocks.
//!
//! Every state and operator in the crate is a [`ComplexMatrix`]. Composite
//! spaces are described by a [`SpaceLayout`], which fixes the tensor-product
//! ordering used by [`kron`] and [`partial_trace`]. Qubit bases put the excited
//! level `|e>` at index 0 and the ground level `|g>` at index 1.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Excited qubit level.
pub const EXCITED: usize = 0;
/// Ground qubit level.
pub const GROUND: usize = 1;

/// Tolerance used to decide whether an operator is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Ordered subsystem dimensions of a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceLayout {
    dims: Vec<usize>,
}

impl SpaceLayout {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::invalid("space layout needs at least one subsystem"));
        }
        if dims.contains(&0) {
            return Err(Error::invalid("subsystem dimensions must be positive"));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: the last subsystem varies fastest.
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a non-empty list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("kron_all requires at least one factor");
    rest.iter().fold((*first).clone(), |acc, f| kron(&acc, f))
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Bosonic annihilation operator on a Fock space truncated to `fock_dim` levels.
pub fn annihilation(fock_dim: usize) -> ComplexMatrix {
    assert!(fock_dim >= 1, "fock_dim must be at least 1");
    let mut a = ComplexMatrix::zeros(fock_dim, fock_dim);
    for n in 1..fock_dim {
        a[(n - 1, n)] = real((n as f64).sqrt());
    }
    a
}

pub fn creation(fock_dim: usize) -> ComplexMatrix {
    annihilation(fock_dim).adjoint()
}

/// `σ+ = |e><g|` in the `(e, g)` basis.
pub fn sigma_plus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(EXCITED, GROUND)] = real(1.0);
    m
}

/// `σ- = |g><e|`.
pub fn sigma_minus() -> ComplexMatrix {
    sigma_plus().adjoint()
}

/// `σz = |e><e| - |g><g|`.
pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_vec(vec![real(1.0), real(-1.0)]))
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[real(0.0), c(0.0, -1.0), c(0.0, 1.0), real(0.0)])
}

/// Computational basis vector `|index>` of dimension `dim`.
pub fn basis(dim: usize, index: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[index] = real(1.0);
    v
}

pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

pub fn projector(psi: &ComplexVector) -> ComplexMatrix {
    psi * psi.adjoint()
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `max |M - M†|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `max |U†U - I|`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &identity(n))
}

/// Checks the density-matrix invariants: unit trace, Hermiticity and
/// positivity up to the given tolerances.
pub fn check_density(rho: &ComplexMatrix, trace_tol: f64, herm_tol: f64, eig_tol: f64) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::invalid("density matrix must be square"));
    }
    let tr = rho.trace();
    if (tr - real(1.0)).norm() > trace_tol {
        return Err(Error::invalid(format!("density matrix trace {tr} differs from 1")));
    }
    let h = hermiticity_defect(rho);
    if h > herm_tol {
        return Err(Error::invalid(format!("density matrix is not Hermitian (defect {h:e})")));
    }
    let min_eig = hermitian_eigenvalues(rho).iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -eig_tol {
        return Err(Error::invalid(format!("density matrix has negative eigenvalue {min_eig:e}")));
    }
    Ok(())
}

/// Eigenvalues of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let sym = hermitian_part(m);
    SymmetricEigen::new(sym).eigenvalues.iter().cloned().collect()
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Reduced state on the subsystems listed in `keep`.
///
/// `keep` must be strictly increasing; the kept subsystems appear in the
/// output in the same order as in the layout.
pub fn partial_trace(rho: &ComplexMatrix, layout: &SpaceLayout, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = layout.total_dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::invalid(format!(
            "matrix is {}x{} but layout describes dimension {n}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= layout.len()) {
        return Err(Error::invalid(format!(
            "subsystem index {bad} out of range for layout with {} subsystems",
            layout.len()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("kept subsystem indices must be strictly increasing"));
    }

    let dims = layout.dims();
    let strides = layout.strides();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_dim: usize = traced_dims.iter().product();

    let offsets = |subsystems: &[usize], sub_dims: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for (pos, &k) in subsystems.iter().enumerate().rev() {
                    off += (idx % sub_dims[pos]) * strides[k];
                    idx /= sub_dims[pos];
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(keep, &kept_dims, out_dim);
    let traced_off = offsets(&traced, &traced_dims, traced_dim);

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (col, &co) in kept_off.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &traced_off {
                acc += rho[(ro + t, co + t)];
            }
            out[(r, col)] = acc;
        }
    }
    Ok(out)
}

/// Reduced state of the pure state `psi` on the subsystems in `keep`,
/// computed without forming the full projector.
pub fn reduce_pure(psi: &ComplexVector, layout: &SpaceLayout, keep: &[usize]) -> Result<ComplexMatrix> {
    if psi.len() != layout.total_dim() {
        return Err(Error::invalid("state length does not match layout"));
    }
    // Permute so the kept subsystems come first, then rho = M M† with M the
    // (kept x traced) reshaping of psi.
    let dims = layout.dims();
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::invalid(format!("subsystem index {bad} out of range")));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("kept subsystem indices must be strictly increasing"));
    }
    let strides = layout.strides();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();
    let flat = |subsystems: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &k in subsystems.iter().rev() {
            off += (idx % dims[k]) * strides[k];
            idx /= dims[k];
        }
        off
    };
    let m = ComplexMatrix::from_fn(kept_dim, traced_dim, |r, col| psi[flat(keep, r) + flat(&traced, col)]);
    Ok(&m * m.adjoint())
}

/// Spectral decomposition of a Hermitian generator, reusable for many times.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: ComplexMatrix,
}

impl Propagator {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::invalid("Hamiltonian must be square"));
        }
        let defect = hermiticity_defect(h);
        if defect > HERMITIAN_TOL {
            return Err(Error::invalid(format!("Hamiltonian is not Hermitian (defect {defect:e})")));
        }
        let eig = SymmetricEigen::new(hermitian_part(h));
        Ok(Self { energies: eig.eigenvalues.iter().cloned().collect(), vectors: eig.eigenvectors })
    }

    /// `exp(-i H t)`.
    pub fn unitary(&self, t: f64) -> ComplexMatrix {
        let phases: Vec<Complex64> = self.energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        scaled * self.vectors.adjoint()
    }
}

/// `exp(-i H t)` for Hermitian `h`.
pub fn evolve_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(Propagator::new(h)?.unitary(t))
}
