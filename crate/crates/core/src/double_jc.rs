//! Double Jaynes-Cummings model: two atoms, each resonantly coupled to its
//! own single-mode cavity.
//!
//! The per-cavity space is ordered `atom ⊗ Fock`; the joint space is
//! `A1 ⊗ F1 ⊗ A2 ⊗ F2`.

use num_complex::Complex64;

use crate::hilbert::{
    annihilation, basis, identity, kron, kron_all, kron_vec, reduce_pure, sigma_minus, sigma_plus, sigma_z,
    ComplexMatrix, SpaceLayout, EXCITED, GROUND,
};
use crate::model::{ModelParams, PreparedState};

/// Excitation number `a†a + σz/2` on `atom ⊗ Fock`.
pub fn excitation_number(fock_dim: usize) -> ComplexMatrix {
    let a = annihilation(fock_dim);
    let photons = a.adjoint() * &a;
    kron(&identity(2), &photons) + kron(&sigma_z(), &identity(fock_dim)).map(|z| z * 0.5)
}

/// `H = ω (a†a + σz/2) + λ (σ+ a + σ- a†)`.
pub fn jc_hamiltonian(params: &ModelParams) -> ComplexMatrix {
    let d = params.fock_dim;
    let a = annihilation(d);
    let coupling = kron(&sigma_plus(), &a) + kron(&sigma_minus(), &a.adjoint());
    excitation_number(d).map(|z| z * params.omega) + coupling.map(|z| z * params.lambda)
}

/// Closed-form propagator at `τ = λt`:
///
/// ```text
/// U = e^{-iωt N} | cos(τ√(aa†))                 -i sin(τ√(aa†))/√(aa†) a |
///                | -i sin(τ√(a†a))/√(a†a) a†    cos(τ√(a†a))             |
/// ```
///
/// The functions of `aa†` and `a†a` are applied to the diagonal of the
/// truncated products, so the result is exact on the truncated space.
pub fn jc_unitary(params: &ModelParams, tau: f64) -> ComplexMatrix {
    let d = params.fock_dim;
    let a = annihilation(d);
    let ad = a.adjoint();
    let aad = (&a * &ad).diagonal().map(|z| z.re);
    let ada = (&ad * &a).diagonal().map(|z| z.re);

    let cos_of = |s: f64| (tau * s.sqrt()).cos();
    let sinc_of = |s: f64| if s > 0.0 { (tau * s.sqrt()).sin() / s.sqrt() } else { tau };
    let diag = |v: &nalgebra::DVector<f64>, f: &dyn Fn(f64) -> f64| {
        ComplexMatrix::from_diagonal(&v.map(|s| Complex64::new(f(s), 0.0)))
    };
    let minus_i = Complex64::new(0.0, -1.0);

    let ee = diag(&aad, &cos_of);
    let eg = (diag(&aad, &sinc_of) * &a).map(|z| z * minus_i);
    let ge = (diag(&ada, &sinc_of) * &ad).map(|z| z * minus_i);
    let gg = diag(&ada, &cos_of);

    let mut w = ComplexMatrix::zeros(2 * d, 2 * d);
    for (row, col, block) in
        [(EXCITED, EXCITED, &ee), (EXCITED, GROUND, &eg), (GROUND, EXCITED, &ge), (GROUND, GROUND, &gg)]
    {
        w.view_mut((row * d, col * d), (d, d)).copy_from(block);
    }
    free_phase(params, tau, &excitation_number(d)) * w
}

/// `exp(-iωt N)` for a diagonal excitation-number operator.
pub(crate) fn free_phase(params: &ModelParams, tau: f64, number: &ComplexMatrix) -> ComplexMatrix {
    let gamma = params.phase(tau);
    ComplexMatrix::from_diagonal(&number.diagonal().map(|n| Complex64::from_polar(1.0, -gamma * n.re)))
}

/// Joint layout `A1 ⊗ F1 ⊗ A2 ⊗ F2`.
pub fn layout(fock_dim: usize) -> SpaceLayout {
    SpaceLayout::new(vec![2, fock_dim, 2, fock_dim]).expect("valid layout")
}

/// Initial pure state: the atom pair in `state.family`, both cavities in
/// `|state.photons>`.
pub fn initial_vector(state: &PreparedState, fock_dim: usize) -> crate::hilbert::ComplexVector {
    let [ca, sa] = state.amplitudes();
    let fock = basis(fock_dim, state.photons);
    let branch = |level: usize, amp: f64| {
        let partner = state.family.partner(level);
        kron_vec(&kron_vec(&kron_vec(&basis(2, level), &fock), &basis(2, partner)), &fock).map(|z| z * amp)
    };
    branch(EXCITED, ca) + branch(GROUND, sa)
}

/// Reduced atomic state of `A1 A2` at `τ`, evolved with the closed-form
/// propagator `U ⊗ U`.
pub fn double_jc_reduced(state: &PreparedState, params: &ModelParams, tau: f64) -> ComplexMatrix {
    assert!(state.photons + 2 <= params.fock_dim, "fock_dim too small for the photon number");
    let u = jc_unitary(params, tau);
    let psi = kron_all(&[&u, &u]) * initial_vector(state, params.fock_dim);
    reduce_pure(&psi, &layout(params.fock_dim), &[0, 2]).expect("layout matches state")
}
