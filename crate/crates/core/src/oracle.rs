//! Brute-force reference pipelines: Hamiltonian, numerical exponential,
//! Kronecker product, partial trace. Nothing here uses the closed-form
//! propagators or coefficient functions.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::Result;
use crate::hilbert::{basis, kron, kron_vec, reduce_pure, ComplexMatrix, ComplexVector, Propagator, SpaceLayout};
use crate::model::{Family, ModelParams, PreparedState};
use crate::{double_jc, tavis};

/// One pair preparation for the four-atom network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPrep {
    pub family: Family,
    pub alpha: f64,
}

/// Pair densities from the full six-subsystem evolution.
#[derive(Debug, Clone)]
pub struct NetworkPairs {
    /// `A1 A2`
    pub same_a: ComplexMatrix,
    /// `B1 B2`
    pub same_b: ComplexMatrix,
    /// `A1 B2`
    pub cross: ComplexMatrix,
    /// `A2 B1`
    pub cross_mirror: ComplexMatrix,
    /// `<N1 + N2>` of the evolved state.
    pub excitations: f64,
}

/// Propagates the network `A1 B1 F1 A2 B2 F2` by exponentiating the block
/// Hamiltonian numerically.
#[derive(Debug, Clone)]
pub struct NetworkOracle {
    params: ModelParams,
    propagator: Propagator,
}

impl NetworkOracle {
    pub fn new(params: &ModelParams) -> Result<Self> {
        Ok(Self { params: *params, propagator: Propagator::new(&tavis::tavis_hamiltonian(params))? })
    }

    pub fn layout(&self) -> SpaceLayout {
        let d = self.params.fock_dim;
        SpaceLayout::new(vec![2, 2, d, 2, 2, d]).expect("valid layout")
    }

    /// `exp(-i H t)` for one block at `τ = λt`.
    pub fn block_unitary(&self, tau: f64) -> ComplexMatrix {
        self.propagator.unitary(tau / self.params.lambda)
    }

    /// Initial vector with `A1 A2` in `pair_a`, `B1 B2` in `pair_b` and both
    /// cavities in `|photons>`.
    pub fn initial_vector(&self, pair_a: PairPrep, pair_b: PairPrep, photons: usize) -> ComplexVector {
        let d = self.params.fock_dim;
        let fock = basis(d, photons);
        // Pair vectors are ordered (first, second); map onto A1 B1 F1 A2 B2 F2.
        let va = pair_a.family.pair_vector(pair_a.alpha);
        let vb = pair_b.family.pair_vector(pair_b.alpha);
        let mut psi = ComplexVector::zeros(16 * d * d);
        for a1 in 0..2 {
            for a2 in 0..2 {
                for b1 in 0..2 {
                    for b2 in 0..2 {
                        let amp = va[2 * a1 + a2] * vb[2 * b1 + b2];
                        if amp.norm() == 0.0 {
                            continue;
                        }
                        let block1 = kron_vec(&kron_vec(&basis(2, a1), &basis(2, b1)), &fock);
                        let block2 = kron_vec(&kron_vec(&basis(2, a2), &basis(2, b2)), &fock);
                        psi += kron_vec(&block1, &block2) * amp;
                    }
                }
            }
        }
        psi
    }

    pub fn evolve(&self, pair_a: PairPrep, pair_b: PairPrep, photons: usize, tau: f64) -> Result<NetworkPairs> {
        let u = self.block_unitary(tau);
        let full = kron(&u, &u);
        let psi = full * self.initial_vector(pair_a, pair_b, photons);
        let layout = self.layout();
        let number = tavis::excitation_number(self.params.fock_dim);
        let total_number = kron(&number, &crate::hilbert::identity(number.nrows()))
            + kron(&crate::hilbert::identity(number.nrows()), &number);
        let excitations = (psi.adjoint() * (total_number * &psi))[(0, 0)].re;
        Ok(NetworkPairs {
            same_a: reduce_pure(&psi, &layout, &[0, 3])?,
            same_b: reduce_pure(&psi, &layout, &[1, 4])?,
            cross: reduce_pure(&psi, &layout, &[0, 4])?,
            cross_mirror: reduce_pure(&psi, &layout, &[1, 3])?,
            excitations,
        })
    }

    /// Symmetric preparation: both pairs in the same family and angle.
    pub fn evolve_symmetric(&self, state: &PreparedState, tau: f64) -> Result<NetworkPairs> {
        let prep = PairPrep { family: state.family, alpha: state.alpha };
        self.evolve(prep, prep, state.photons, tau)
    }
}

/// `V_ijkl` read off a numerically exponentiated block propagator, with
/// zero-based levels (`0 = e`, `1 = g`).
pub fn v_operator_from_unitary(
    u: &ComplexMatrix,
    fock_dim: usize,
    photons: usize,
    idx: [usize; 4],
) -> Matrix2<Complex64> {
    let [i, j, k, l] = idx;
    let half = 2 * fock_dim;
    // <x|U|y> on the atom sandwiched: rows/cols over (partner ⊗ Fock).
    let sandwich = |m: &ComplexMatrix, x: usize, y: usize| m.view((x * half, y * half), (half, half)).into_owned();
    let ud = u.adjoint();
    let product = sandwich(&ud, i, j) * sandwich(u, k, l);
    Matrix2::from_fn(|r, c| product[(r * fock_dim + photons, c * fock_dim + photons)])
}

/// Reduced `A1 A2` state of the double JC model via numerical exponentiation.
pub fn double_jc_reduced_brute(state: &PreparedState, params: &ModelParams, tau: f64) -> Result<ComplexMatrix> {
    let u = Propagator::new(&double_jc::jc_hamiltonian(params))?.unitary(tau / params.lambda);
    let psi = kron(&u, &u) * double_jc::initial_vector(state, params.fock_dim);
    reduce_pure(&psi, &double_jc::layout(params.fock_dim), &[0, 2])
}
