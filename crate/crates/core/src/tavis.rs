//! Generalized double Jaynes-Cummings network: two atoms `A_i`, `B_i` share
//! cavity `F_i`, and the blocks `i = 1, 2` evolve independently.
//!
//! Block space ordering is `A ⊗ B ⊗ F`, so the atomic block index runs over
//! `|ee>, |eg>, |ge>, |gg>` and the full index is `block * fock_dim + n`.
//!
//! Two independent routes produce the pair density matrices:
//!
//! * [`rho_pair_same`] / [`rho_pair_cross`]: explicit element formulas in the
//!   coefficient functions `a … r` of [`CoefficientSet`].
//! * [`rho_pair_same_from_v`] / [`rho_pair_cross_from_v`]: contraction of the
//!   partner-qubit operators `V_ijkl` of [`VTable`].
//!
//! Both are checked against the brute-force pipeline in [`crate::oracle`].

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::double_jc::free_phase;
use crate::error::{Error, Result};
use crate::hilbert::{annihilation, identity, kron_all, real, sigma_minus, sigma_plus, sigma_z, ComplexMatrix};
use crate::model::{Family, ModelParams, PreparedState};

/// `a†a + (σz_A + σz_B)/2` on `A ⊗ B ⊗ F`.
pub fn excitation_number(fock_dim: usize) -> ComplexMatrix {
    let a = annihilation(fock_dim);
    let i2 = identity(2);
    let idf = identity(fock_dim);
    kron_all(&[&i2, &i2, &(a.adjoint() * &a)])
        + (kron_all(&[&sigma_z(), &i2, &idf]) + kron_all(&[&i2, &sigma_z(), &idf])).map(|z| z * 0.5)
}

/// `H = ω N + λ Σ_{X=A,B} (σ+_X a + σ-_X a†)` on `A ⊗ B ⊗ F`.
pub fn tavis_hamiltonian(params: &ModelParams) -> ComplexMatrix {
    let d = params.fock_dim;
    let a = annihilation(d);
    let ad = a.adjoint();
    let i2 = identity(2);
    let coupling = kron_all(&[&sigma_plus(), &i2, &a])
        + kron_all(&[&sigma_minus(), &i2, &ad])
        + kron_all(&[&i2, &sigma_plus(), &a])
        + kron_all(&[&i2, &sigma_minus(), &ad]);
    excitation_number(d).map(|z| z * params.omega) + coupling.map(|z| z * params.lambda)
}

/// Closed-form block propagator at `τ = λt`.
///
/// With `S = aa† + a†a`, the atomic 4×4 block matrix has entries built from
/// `S⁻¹ sin²(τ√(S/2))`, `sin(τ√(2S))/√(2S)`, `cos²(τ√(S/2))` and
/// `sin²(τ√(S/2))`, sandwiched between `a` and `a†`. Every function of `S` is
/// applied to the diagonal of the truncated `S`, which is strictly positive
/// for `fock_dim ≥ 2`.
pub fn tavis_unitary(params: &ModelParams, tau: f64) -> ComplexMatrix {
    let d = params.fock_dim;
    assert!(d >= 2, "fock_dim must be at least 2");
    let a = annihilation(d);
    let ad = a.adjoint();
    let s = (&a * &ad + &ad * &a).diagonal().map(|z| z.re);
    let diag = |f: &dyn Fn(f64) -> f64| ComplexMatrix::from_diagonal(&s.map(|x| real(f(x))));

    let sin2_half = |x: f64| (tau * (x / 2.0).sqrt()).sin().powi(2);
    let f_inv = diag(&|x| sin2_half(x) / x);
    let g = diag(&|x| (tau * (2.0 * x).sqrt()).sin() / (2.0 * x).sqrt());
    let cos2 = diag(&|x| (tau * (x / 2.0).sqrt()).cos().powi(2));
    let sin2 = diag(&sin2_half);

    let minus_i = Complex64::new(0.0, -1.0);
    let scale = |m: ComplexMatrix, z: Complex64| m.map(|v| v * z);
    let id = identity(d);

    let e11 = &id - scale(&a * &f_inv * &ad, real(2.0));
    let e14 = scale(&a * &f_inv * &a, real(-2.0));
    let e41 = scale(&ad * &f_inv * &ad, real(-2.0));
    let e44 = &id - scale(&ad * &f_inv * &a, real(2.0));
    let top = scale(&a * &g, minus_i);
    let left = scale(&g * &ad, minus_i);
    let right = scale(&g * &a, minus_i);
    let bottom = scale(&ad * &g, minus_i);
    let minus_sin2 = -sin2;

    let blocks: [[&ComplexMatrix; 4]; 4] = [
        [&e11, &top, &top, &e14],
        [&left, &cos2, &minus_sin2, &right],
        [&left, &minus_sin2, &cos2, &right],
        [&e41, &bottom, &bottom, &e44],
    ];
    let mut w = ComplexMatrix::zeros(4 * d, 4 * d);
    for (r, row) in blocks.iter().enumerate() {
        for (c, block) in row.iter().enumerate() {
            w.view_mut((r * d, c * d), (d, d)).copy_from(*block);
        }
    }
    free_phase(params, tau, &excitation_number(d)) * w
}

/// The coefficient functions of the partner-qubit operators for a cavity in
/// `|N>`, at dimensionless time `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub h: f64,
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// Free phase `γ = ωt`.
    pub gamma_phase: f64,
}

impl CoefficientSet {
    pub fn with_phase(mut self, gamma: f64) -> Self {
        self.gamma_phase = gamma;
        self
    }

    /// Values in the order `a b c d f h k l m n p q r`.
    pub fn values(&self) -> [f64; 13] {
        [self.a, self.b, self.c, self.d, self.f, self.h, self.k, self.l, self.m, self.n, self.p, self.q, self.r]
    }

    pub const NAMES: [&'static str; 13] = ["a", "b", "c", "d", "f", "h", "k", "l", "m", "n", "p", "q", "r"];
}

/// Evaluates the coefficient functions at `τ = λt` for a cavity in `|N>`.
///
/// Terms carrying a factor `N` involve `√(N - 1/2)`, which is imaginary at
/// `N = 0`; they are taken at their limit, zero. The same holds for the
/// `N(N-1)` term at `N = 1`.
pub fn coefficient_set(tau: f64, photons: usize) -> CoefficientSet {
    let nf = photons as f64;
    let lo = (nf + 0.5).sqrt();
    let hi = (nf + 1.5).sqrt();

    let sin_lo = (tau * lo).sin();
    let cos_lo = (tau * lo).cos();
    let sin_hi = (tau * hi).sin();
    let sin2_lo = (2.0 * tau * lo).sin();
    let sin2_hi = (2.0 * tau * hi).sin();

    // (N+1)/(N+3/2), (N+1)/√((N+1)²-1/4)
    let up_ratio = (nf + 1.0) / (nf + 1.5);
    let up_root = (nf + 1.0) / ((nf + 1.0).powi(2) - 0.25).sqrt();
    let damp_hi = 1.0 - up_ratio * sin_hi.powi(2);

    // Contributions through √(N - 1/2), all proportional to N.
    let (k, l_extra, n_val, r_factor) = if photons == 0 {
        (0.0, 0.0, 1.0, 1.0)
    } else {
        let below = (nf - 0.5).sqrt();
        let sin_below = (tau * below).sin();
        let sin2_below = (2.0 * tau * below).sin();
        let down_ratio = nf / (nf - 0.5);
        let damp_lo = 1.0 - down_ratio * sin_below.powi(2);
        let quarter = nf / (4.0 * (nf - 0.5)) * sin2_below.powi(2);
        let pair = if photons >= 2 { nf * (nf - 1.0) / (nf - 0.5).powi(2) * sin_below.powi(4) } else { 0.0 };
        let cross = nf / (4.0 * (nf * nf - 0.25).sqrt()) * sin2_below * sin2_lo;
        (quarter + pair, cross, quarter + damp_lo.powi(2), damp_lo)
    };
    let cross_hi = up_root / 4.0 * sin2_lo * sin2_hi;

    CoefficientSet {
        a: damp_hi.powi(2) + (nf + 1.0) / (4.0 * (nf + 1.5)) * sin2_hi.powi(2),
        b: cos_lo.powi(4) + nf / (4.0 * (nf + 0.5)) * sin2_lo.powi(2),
        c: cross_hi - sin_lo.powi(2) * damp_hi,
        d: (nf + 1.0) / (4.0 * (nf + 1.5)) * sin2_hi.powi(2)
            + (nf + 1.0) * (nf + 2.0) / (nf + 1.5).powi(2) * sin_hi.powi(4),
        f: sin_lo.powi(4) + (nf + 1.0) / (4.0 * (nf + 0.5)) * sin2_lo.powi(2),
        h: sin_lo.powi(4) + nf / (4.0 * (nf + 0.5)) * sin2_lo.powi(2),
        k,
        l: l_extra - sin_lo.powi(2) * r_factor,
        m: cos_lo.powi(4) + (nf + 1.0) / (4.0 * (nf + 0.5)) * sin2_lo.powi(2),
        n: n_val,
        p: -sin2_lo.powi(2) / (8.0 * (nf + 0.5)),
        q: cos_lo.powi(2) * damp_hi + cross_hi,
        r: cos_lo.powi(2) * r_factor + l_extra,
        gamma_phase: 0.0,
    }
}

/// Partner-qubit operator `V_ijkl = Tr_F(ρ_F <i|U†|j> <k|U|l>)`, with the
/// sandwich taken on one atom and the result acting on the other.
///
/// Indices follow the labels `1 = e`, `2 = g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VOperator {
    pub indices: [u8; 4],
    pub matrix: Matrix2<Complex64>,
}

impl VOperator {
    pub fn to_dense(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| self.matrix[(r, c)])
    }
}

/// All sixteen `V_ijkl` for one coefficient set, indexed by zero-based levels
/// (`0 = e`, `1 = g`).
#[derive(Debug, Clone)]
pub struct VTable {
    ops: [Matrix2<Complex64>; 16],
}

fn slot(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * 2 + j) * 2 + k) * 2 + l
}

impl VTable {
    pub fn new(cs: &CoefficientSet) -> Self {
        let z = real(0.0);
        let phase = Complex64::from_polar(1.0, cs.gamma_phase);
        let diag = |x: f64, y: f64| Matrix2::new(real(x), z, z, real(y));
        let upper = |x: f64| Matrix2::new(z, real(x), z, z);
        let lower = |x: f64| Matrix2::new(z, z, real(x), z);

        let mut ops = [Matrix2::zeros(); 16];
        // Table entries with zero-based indices; the rest follow from V_ijkl† = V_lkji.
        let listed = [
            ((0, 0, 0, 0), diag(cs.a, cs.b)),
            ((0, 0, 1, 0), upper(cs.c) * phase),
            ((0, 1, 1, 0), diag(cs.d, cs.f)),
            ((1, 0, 0, 1), diag(cs.h, cs.k)),
            ((1, 0, 1, 1), upper(cs.l) * phase),
            ((1, 1, 1, 1), diag(cs.m, cs.n)),
            ((0, 0, 0, 1), lower(cs.p)),
            ((0, 0, 1, 1), diag(cs.q, cs.r) * phase),
            ((0, 1, 1, 1), lower(-cs.p)),
        ];
        for &((i, j, k, l), m) in &listed {
            ops[slot(i, j, k, l)] = m;
            ops[slot(l, k, j, i)] = m.adjoint();
        }
        // V_1212 and V_2121 vanish.
        ops[slot(0, 1, 0, 1)] = Matrix2::zeros();
        ops[slot(1, 0, 1, 0)] = Matrix2::zeros();
        Self { ops }
    }

    pub fn at(tau: f64, photons: usize, params: &ModelParams) -> Self {
        Self::new(&coefficient_set(tau, photons).with_phase(params.phase(tau)))
    }

    /// Zero-based lookup.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Matrix2<Complex64> {
        &self.ops[slot(i, j, k, l)]
    }
}

/// `V_ijkl` at `τ` for a cavity in `|N>` (zero free phase), with one-based
/// indices `1 = e`, `2 = g`.
pub fn v_operator(i: u8, j: u8, k: u8, l: u8, tau: f64, photons: usize) -> Result<VOperator> {
    let idx = [i, j, k, l];
    if idx.iter().any(|&x| !(1..=2).contains(&x)) {
        return Err(Error::invalid(format!("V-operator indices {idx:?} must be 1 or 2")));
    }
    let table = VTable::new(&coefficient_set(tau, photons));
    let z = |x: u8| (x - 1) as usize;
    Ok(VOperator { indices: idx, matrix: *table.get(z(i), z(j), z(k), z(l)) })
}

/// Pair density of `A1 A2` (equal to that of `B1 B2`) from the explicit
/// element formulas.
pub fn rho_pair_same(state: &PreparedState, params: &ModelParams, tau: f64) -> ComplexMatrix {
    let cs = coefficient_set(tau, state.photons);
    let CoefficientSet { a, b, c, d, f, h, k, l, m, n, p, q, r, .. } = cs;
    let (ca, sa) = (state.alpha.cos(), state.alpha.sin());
    let (c2, s2) = (ca * ca, sa * sa);
    let (c4, s4) = (c2 * c2, s2 * s2);
    let sin2a = (2.0 * state.alpha).sin();
    let sin2a_sq = sin2a * sin2a;

    let mut rho = ComplexMatrix::zeros(4, 4);
    match state.family {
        Family::Phi => {
            let middle = a * d * c4 + (b * f + h * m - 2.0 * p * p) / 4.0 * sin2a_sq + k * n * s4;
            rho[(0, 0)] = real(a * a * c4 + (b * b + h * h + 2.0 * p * p) / 4.0 * sin2a_sq + k * k * s4);
            rho[(1, 1)] = real(middle);
            rho[(2, 2)] = real(middle);
            rho[(3, 3)] = real(d * d * c4 + (f * f + 2.0 * p * p + m * m) / 4.0 * sin2a_sq + n * n * s4);
            let corner = 0.5 * ((c * c + q * q) * c2 + (l * l + r * r) * s2) * sin2a;
            let coherence = Complex64::from_polar(corner, -2.0 * params.phase(tau));
            rho[(0, 3)] = coherence;
            rho[(3, 0)] = coherence.conj();
        }
        Family::Psi => {
            let mix = (f * h + b * m - 2.0 * p * p) / 4.0 * sin2a_sq;
            rho[(0, 0)] = real(a * k * c4 + (b * h + p * p) / 2.0 * sin2a_sq + a * k * s4);
            rho[(1, 1)] = real(a * n * c4 + mix + d * k * s4);
            rho[(2, 2)] = real(d * k * c4 + mix + a * n * s4);
            rho[(3, 3)] = real(d * n * c4 + (f * m + p * p) / 2.0 * sin2a_sq + d * n * s4);
            let coherence = real((c * l + q * r) / 2.0 * sin2a);
            rho[(1, 2)] = coherence;
            rho[(2, 1)] = coherence;
        }
    }
    rho
}

/// Pair density of `A1 B2` (equal to that of `A2 B1`).
///
/// The Φ family uses the explicit element formulas; the Ψ family has no
/// printed element list and goes through the V-operator contraction.
pub fn rho_pair_cross(state: &PreparedState, params: &ModelParams, tau: f64) -> ComplexMatrix {
    if state.family == Family::Psi {
        return rho_pair_cross_from_v(state, params, tau);
    }
    let CoefficientSet { a, b, c, d, f, h, k, l, m, n, p, q, r, .. } = coefficient_set(tau, state.photons);
    let (ca, sa) = (state.alpha.cos(), state.alpha.sin());
    let (c2, s2) = (ca * ca, sa * sa);
    let (c4, s4) = (c2 * c2, s2 * s2);
    let sin2a = (2.0 * state.alpha).sin();
    let sin2a_sq = sin2a * sin2a;

    let mut rho = ComplexMatrix::zeros(4, 4);
    let middle = a * d * c4 + (f * h + b * m - 2.0 * p * p) / 4.0 * sin2a_sq + k * n * s4;
    rho[(0, 0)] = real(a * a * c4 + (b * h + p * p) / 2.0 * sin2a_sq + k * k * s4);
    rho[(1, 1)] = real(middle);
    rho[(2, 2)] = real(middle);
    rho[(3, 3)] = real(d * d * c4 + (f * m + p * p) / 2.0 * sin2a_sq + n * n * s4);
    let corner = (c * q * c2 + l * r * s2) * sin2a;
    let coherence = Complex64::from_polar(corner, -2.0 * params.phase(tau));
    rho[(0, 3)] = coherence;
    rho[(3, 0)] = coherence.conj();
    rho
}

/// `A1 A2` pair density by contracting V-operators:
///
/// `ρ_{kl,mn} = Σ_{ijpq} s_i s_j s_p s_q <q|V_{jmki}|p> <π(q)|V_{π(j) n l π(i)}|π(p)>`
///
/// where `π` maps a level of the first qubit of a pair to its partner level.
pub fn rho_pair_same_from_v(state: &PreparedState, params: &ModelParams, tau: f64) -> ComplexMatrix {
    let table = VTable::at(tau, state.photons, params);
    contract(&table, state, |table, pi, (i, j, p, q), (k, l, m, n)| {
        table.get(j, m, k, i)[(q, p)] * table.get(pi(j), n, l, pi(i))[(pi(q), pi(p))]
    })
}

/// `A1 B2` pair density by contracting V-operators:
///
/// `ρ_{kl,mn} = Σ_{ijpq} s_i s_j s_p s_q <q|V_{jmki}|p> <π(j)|V_{π(q) n l π(p)}|π(i)>`
///
/// The first factor comes from block 1 (sandwich on `A1`, partner `B1`), the
/// second from block 2 with the sandwich on `B2` and the partner `A2` traced;
/// the block symmetry under `A ↔ B` lets the same table serve both.
pub fn rho_pair_cross_from_v(state: &PreparedState, params: &ModelParams, tau: f64) -> ComplexMatrix {
    let table = VTable::at(tau, state.photons, params);
    contract(&table, state, |table, pi, (i, j, p, q), (k, l, m, n)| {
        table.get(j, m, k, i)[(q, p)] * table.get(pi(q), n, l, pi(p))[(pi(j), pi(i))]
    })
}

type Quad = (usize, usize, usize, usize);

fn contract(
    table: &VTable,
    state: &PreparedState,
    term: impl Fn(&VTable, &dyn Fn(usize) -> usize, Quad, Quad) -> Complex64,
) -> ComplexMatrix {
    let s = state.amplitudes();
    let family = state.family;
    let pi = move |x: usize| family.partner(x);
    let mut rho = ComplexMatrix::zeros(4, 4);
    for k in 0..2 {
        for l in 0..2 {
            for m in 0..2 {
                for n in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..2 {
                        for j in 0..2 {
                            for p in 0..2 {
                                for q in 0..2 {
                                    let weight = s[i] * s[j] * s[p] * s[q];
                                    if weight != 0.0 {
                                        acc += term(table, &pi, (i, j, p, q), (k, l, m, n)) * weight;
                                    }
                                }
                            }
                        }
                    }
                    rho[(2 * k + l, 2 * m + n)] = acc;
                }
            }
        }
    }
    rho
}
