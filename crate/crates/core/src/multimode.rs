//! Multimode (Lorentzian bath) extension.
//!
//! Each block `A_i B_i` couples through the collective lowering operator
//! `L_i = σ-_{A_i} + σ-_{B_i}` to its own bath with correlation function
//! `G_i(t, s) = (Γ γ_i / 2) exp(-γ_i |t - s|)`. This module provides
//!
//! * the deterministic coefficient ODEs of the O-operator ansatz
//!   ([`qsd_coefficients`]),
//! * the analytic long-time pair states ([`steady_state_pair`]),
//! * a Markov-limit Lindblad integrator used as an independent oracle for the
//!   long-time states ([`lindblad_evolve`]).
//!
//! Four-qubit matrices use the ordering `A1 ⊗ B1 ⊗ A2 ⊗ B2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::entanglement::concurrence_x;
use crate::entanglement::XState;
use crate::error::{Error, Result};
use crate::hilbert::{
    basis, hermiticity_defect, identity, kron_all, kron_vec, max_abs, max_abs_diff, partial_trace, projector, real,
    sigma_minus, ComplexMatrix, ComplexVector, SpaceLayout,
};
use crate::model::{Family, PreparedState};
use crate::sweep::golden_section_min;

/// Parameters of one Lorentzian bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathParams {
    /// Overall decay rate Γ.
    pub gamma_total: f64,
    /// Memory rate γ (inverse correlation time).
    pub gamma_memory: f64,
    /// Qubit frequency ω.
    pub omega: f64,
}

impl BathParams {
    pub fn new(gamma_total: f64, gamma_memory: f64, omega: f64) -> Result<Self> {
        if !(gamma_total > 0.0) || !gamma_total.is_finite() {
            return Err(Error::invalid("Gamma must be positive"));
        }
        if !(gamma_memory > 0.0) || !gamma_memory.is_finite() {
            return Err(Error::invalid("gamma must be positive"));
        }
        if !omega.is_finite() {
            return Err(Error::invalid("omega must be finite"));
        }
        Ok(Self { gamma_total, gamma_memory, omega })
    }
}

/// `(F_1, F_2, Ū)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QsdState {
    pub f1: Complex64,
    pub f2: Complex64,
    pub u_bar: Complex64,
}

impl QsdState {
    fn axpy(&self, h: f64, d: &QsdState) -> QsdState {
        QsdState { f1: self.f1 + d.f1 * h, f2: self.f2 + d.f2 * h, u_bar: self.u_bar + d.u_bar * h }
    }

    pub fn norm_max(&self) -> f64 {
        self.f1.norm().max(self.f2.norm()).max(self.u_bar.norm())
    }

    fn is_finite(&self) -> bool {
        [self.f1, self.f2, self.u_bar].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn max_diff(&self, other: &QsdState) -> f64 {
        (self.f1 - other.f1).norm().max((self.f2 - other.f2).norm()).max((self.u_bar - other.u_bar).norm())
    }
}

/// Time derivative of the coefficient functions:
///
/// ```text
/// F1' = Γγ/2 + (-γ + iω) F1 + F1² + 3 F2² - (i/2) Ū
/// F2' = (-γ + iω) F2 - F1² + 4 F1 F2 + F2² - (i/2) Ū
/// Ū'  = -2iγ F2 + (-2γ + 2iω) Ū + 4 F1 Ū
/// ```
pub fn qsd_derivative(bath: &BathParams, s: &QsdState) -> QsdState {
    let g = bath.gamma_memory;
    let i = Complex64::new(0.0, 1.0);
    let lin = Complex64::new(-g, bath.omega);
    let half_i_u = i * 0.5 * s.u_bar;
    QsdState {
        f1: real(bath.gamma_total * g / 2.0) + lin * s.f1 + s.f1 * s.f1 + 3.0 * s.f2 * s.f2 - half_i_u,
        f2: lin * s.f2 - s.f1 * s.f1 + 4.0 * s.f1 * s.f2 + s.f2 * s.f2 - half_i_u,
        u_bar: -2.0 * i * g * s.f2 + 2.0 * lin * s.u_bar + 4.0 * s.f1 * s.u_bar,
    }
}

/// Derivative norm below which the coefficients count as stationary.
pub const FIXED_POINT_TOL: f64 = 1e-8;
/// Coefficient magnitude treated as a blow-up.
pub const DIVERGENCE_NORM: f64 = 1e6;

/// Sampled solution of the coefficient ODEs from the boundary values
/// `F_1(0) = F_2(0) = Ū(0) = 0`.
#[derive(Debug, Clone)]
pub struct QsdTrajectory {
    pub bath: BathParams,
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<QsdState>,
    /// Max-norm of the time derivative at the final time.
    pub final_derivative_norm: f64,
    pub fixed_point_reached: bool,
}

impl QsdTrajectory {
    pub fn final_state(&self) -> QsdState {
        *self.states.last().expect("trajectory has at least one sample")
    }

    /// Local coefficient `U(t, t) = -4i F_2(t)`.
    pub fn u_diagonal(&self, index: usize) -> Complex64 {
        Complex64::new(0.0, -4.0) * self.states[index].f2
    }
}

fn rk4_qsd(bath: &BathParams, s: &QsdState, h: f64) -> QsdState {
    let k1 = qsd_derivative(bath, s);
    let k2 = qsd_derivative(bath, &s.axpy(h / 2.0, &k1));
    let k3 = qsd_derivative(bath, &s.axpy(h / 2.0, &k2));
    let k4 = qsd_derivative(bath, &s.axpy(h, &k3));
    QsdState {
        f1: s.f1 + (k1.f1 + 2.0 * k2.f1 + 2.0 * k3.f1 + k4.f1) * (h / 6.0),
        f2: s.f2 + (k1.f2 + 2.0 * k2.f2 + 2.0 * k3.f2 + k4.f2) * (h / 6.0),
        u_bar: s.u_bar + (k1.u_bar + 2.0 * k2.u_bar + 2.0 * k3.u_bar + k4.u_bar) * (h / 6.0),
    }
}

fn check_step(t_max: f64, dt: f64) -> Result<usize> {
    if !(t_max > 0.0) || !(dt > 0.0) || !t_max.is_finite() || !dt.is_finite() {
        return Err(Error::invalid("t_max and dt must be positive"));
    }
    let steps = (t_max / dt).round();
    if (steps * dt - t_max).abs() > 1e-9 * t_max {
        return Err(Error::invalid("t_max must be an integer multiple of dt"));
    }
    Ok(steps as usize)
}

/// Integrates the coefficient ODEs with fixed-step RK4 up to `t_max`.
///
/// Fails with [`Error::IntegrationFailure`] carrying the blow-up time when any
/// coefficient exceeds [`DIVERGENCE_NORM`].
pub fn qsd_coefficients(bath: &BathParams, t_max: f64, dt: f64) -> Result<QsdTrajectory> {
    let steps = check_step(t_max, dt)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = QsdState::default();
    times.push(0.0);
    states.push(s);
    for n in 1..=steps {
        s = rk4_qsd(bath, &s, dt);
        let t = n as f64 * dt;
        if !s.is_finite() || s.norm_max() > DIVERGENCE_NORM {
            return Err(Error::IntegrationFailure {
                time: t,
                reason: format!("coefficient norm exceeded {DIVERGENCE_NORM:e}"),
            });
        }
        times.push(t);
        states.push(s);
    }
    let final_derivative_norm = qsd_derivative(bath, &s).norm_max();
    Ok(QsdTrajectory {
        bath: *bath,
        dt,
        times,
        states,
        final_derivative_norm,
        fixed_point_reached: final_derivative_norm < FIXED_POINT_TOL,
    })
}

/// Endpoint change when the step is halved.
pub fn qsd_step_refinement(bath: &BathParams, t_max: f64, dt: f64) -> Result<f64> {
    let coarse = qsd_coefficients(bath, t_max, dt)?.final_state();
    let fine = qsd_coefficients(bath, t_max, dt / 2.0)?.final_state();
    Ok(coarse.max_diff(&fine))
}

/// Analytic long-time pair states.
#[derive(Debug, Clone, Serialize)]
pub struct SteadyState {
    pub family: Family,
    /// Angle in radians.
    pub alpha: f64,
    pub y: f64,
    pub x_abs: f64,
    #[serde(skip)]
    pub rho_same: ComplexMatrix,
    #[serde(skip)]
    pub rho_cross: ComplexMatrix,
}

/// Long-time densities of `A1 A2` and `A1 B2`.
///
/// Both families share the diagonal `(y, y, y, 1 - 3y)` with
/// `y = cos²α sin²α / 4`. The Φ family adds the corner coherence `x` in
/// `A1 A2` and `-x` in `A1 B2`, with `|x| = cos α sin³α / 2`; `x` is stored
/// real and non-negative.
pub fn steady_state_pair(alpha: f64, family: Family) -> SteadyState {
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let y = 0.25 * ca * ca * sa * sa;
    let x_abs = 0.5 * ca * sa.powi(3);
    let coherence = match family {
        Family::Phi => x_abs,
        Family::Psi => 0.0,
    };
    let build = |corner: f64| XState { a: y, b: y, c: y, d: 1.0 - 3.0 * y, e: real(0.0), f: real(corner) }.to_matrix();
    SteadyState { family, alpha, y, x_abs, rho_same: build(coherence), rho_cross: build(-coherence) }
}

/// `C = 2 max(|x| - y, 0)` for Φ, zero for Ψ.
pub fn steady_concurrence(alpha: f64, family: Family) -> f64 {
    match family {
        Family::Phi => {
            let s = steady_state_pair(alpha, family);
            2.0 * (s.x_abs - s.y).max(0.0)
        }
        Family::Psi => 0.0,
    }
}

/// Angle (radians) and value of the largest Φ-family long-time concurrence.
pub fn steady_concurrence_max() -> (f64, f64) {
    let onset = 0.5f64.atan();
    let (alpha, neg) =
        golden_section_min(|a| -steady_concurrence(a, Family::Phi), onset, std::f64::consts::FRAC_PI_2, 1e-12);
    (alpha, -neg)
}

/// Concurrence of the assembled analytic state, via the X-state formula.
pub fn steady_concurrence_of_state(s: &SteadyState) -> (f64, f64) {
    let same = XState::from_matrix(&s.rho_same, 1e-12).expect("X form");
    let cross = XState::from_matrix(&s.rho_cross, 1e-12).expect("X form");
    (concurrence_x(&same), concurrence_x(&cross))
}

fn four_qubit_layout() -> SpaceLayout {
    SpaceLayout::new(vec![2, 2, 2, 2]).expect("valid layout")
}

/// Collective lowering operators `L_1`, `L_2` on `A1 B1 A2 B2`.
pub fn collective_lowering() -> [ComplexMatrix; 2] {
    let i2 = identity(2);
    let sm = sigma_minus();
    [
        kron_all(&[&sm, &i2, &i2, &i2]) + kron_all(&[&i2, &sm, &i2, &i2]),
        kron_all(&[&i2, &i2, &sm, &i2]) + kron_all(&[&i2, &i2, &i2, &sm]),
    ]
}

/// `|φ_A> ⊗ |φ_B>` written in the `A1 B1 A2 B2` ordering.
pub fn initial_four_qubit(family: Family, alpha: f64) -> ComplexVector {
    let pair = family.pair_vector(alpha);
    let mut psi = ComplexVector::zeros(16);
    for a1 in 0..2 {
        for a2 in 0..2 {
            for b1 in 0..2 {
                for b2 in 0..2 {
                    let amp = pair[2 * a1 + a2] * pair[2 * b1 + b2];
                    let ket =
                        kron_vec(&kron_vec(&kron_vec(&basis(2, a1), &basis(2, b1)), &basis(2, a2)), &basis(2, b2));
                    psi += ket * amp;
                }
            }
        }
    }
    psi
}

/// Markov-limit generator `Γ Σ_i (L_i ρ L_i† - ½ {L_i† L_i, ρ})`.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    rate: f64,
    jumps: [Sparse; 2],
    /// `½ Σ L_i† L_i`
    decay: Sparse,
}

/// Nonzero entries `(row, col, value)` of a small operator. The jump
/// operators have 16 nonzeros out of 256, so products are done entrywise.
#[derive(Debug, Clone)]
struct Sparse(Vec<(usize, usize, Complex64)>);

impl Sparse {
    fn from_dense(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                if m[(r, c)].norm() > 0.0 {
                    entries.push((r, c, m[(r, c)]));
                }
            }
        }
        Self(entries)
    }

    /// `self * m`
    fn left_mul(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(m.nrows(), m.ncols());
        for &(r, c, v) in &self.0 {
            for j in 0..m.ncols() {
                out[(r, j)] += v * m[(c, j)];
            }
        }
        out
    }

    /// `m * self†`
    fn right_mul_adjoint(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(m.nrows(), m.ncols());
        for &(r, c, v) in &self.0 {
            let v = v.conj();
            for i in 0..m.nrows() {
                out[(i, r)] += m[(i, c)] * v;
            }
        }
        out
    }
}

impl LindbladGenerator {
    pub fn new(rate: f64) -> Self {
        let [l1, l2] = collective_lowering();
        let decay = (l1.adjoint() * &l1 + l2.adjoint() * &l2).map(|z| z * 0.5);
        Self { rate, jumps: [Sparse::from_dense(&l1), Sparse::from_dense(&l2)], decay: Sparse::from_dense(&decay) }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        // D and ρ are Hermitian, so ρD = (Dρ)†.
        let d_rho = self.decay.left_mul(rho);
        let mut out = -(&d_rho) - d_rho.adjoint();
        for l in &self.jumps {
            out += l.right_mul_adjoint(&l.left_mul(rho));
        }
        out * real(self.rate)
    }

    fn rk4(&self, rho: &ComplexMatrix, h: f64) -> ComplexMatrix {
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &k1 * real(h / 2.0)));
        let k3 = self.apply(&(rho + &k2 * real(h / 2.0)));
        let k4 = self.apply(&(rho + &k3 * real(h)));
        rho + (k1 + (k2 + k3) * real(2.0) + k4) * real(h / 6.0)
    }
}

/// Result of a Lindblad integration.
#[derive(Debug, Clone)]
pub struct LindbladRun {
    pub rho: ComplexMatrix,
    /// `max |dρ/dt|` at the final time.
    pub generator_norm: f64,
    /// Largest `|Tr ρ - 1|` seen along the trajectory.
    pub max_trace_error: f64,
    /// Largest `max |ρ - ρ†|` seen along the trajectory.
    pub max_hermiticity_defect: f64,
    /// Smallest eigenvalue of the final state.
    pub min_eigenvalue: f64,
    /// Endpoint change when the step is halved.
    pub refinement_drift: f64,
}

impl LindbladRun {
    pub fn is_stationary(&self) -> bool {
        self.generator_norm < FIXED_POINT_TOL
    }

    /// `(ρ_A1A2, ρ_A1B2)` of the final state.
    pub fn pair_reductions(&self) -> (ComplexMatrix, ComplexMatrix) {
        pair_reductions(&self.rho)
    }
}

pub fn pair_reductions(rho: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let layout = four_qubit_layout();
    (
        partial_trace(rho, &layout, &[0, 2]).expect("16x16 state"),
        partial_trace(rho, &layout, &[0, 3]).expect("16x16 state"),
    )
}

/// Drift under step halving above which the integration is rejected.
pub const REFINEMENT_TOL: f64 = 1e-8;

struct Trace {
    rho: ComplexMatrix,
    max_trace_error: f64,
    max_herm: f64,
}

fn integrate(generator: &LindbladGenerator, rho0: &ComplexMatrix, steps: usize, h: f64) -> Result<Trace> {
    let mut rho = rho0.clone();
    let mut max_trace_error = 0.0_f64;
    let mut max_herm = 0.0_f64;
    for n in 1..=steps {
        rho = generator.rk4(&rho, h);
        let norm = max_abs(&rho);
        if !norm.is_finite() || norm > 1.0 + 1e-6 {
            return Err(Error::IntegrationFailure {
                time: n as f64 * h,
                reason: "Lindblad step is unstable; reduce dt".into(),
            });
        }
        max_trace_error = max_trace_error.max((rho.trace() - real(1.0)).norm());
        max_herm = max_herm.max(hermiticity_defect(&rho));
    }
    Ok(Trace { rho, max_trace_error, max_herm })
}

/// Integrates the Markov-limit master equation from the symmetric four-qubit
/// preparation with fixed-step RK4, then repeats with `dt / 2` and rejects the
/// run when the endpoints differ by more than [`REFINEMENT_TOL`].
pub fn lindblad_evolve(state: &PreparedState, rate: f64, t_max: f64, dt: f64) -> Result<LindbladRun> {
    if !(rate > 0.0) {
        return Err(Error::invalid("Gamma must be positive"));
    }
    let steps = check_step(t_max, dt)?;
    let generator = LindbladGenerator::new(rate);
    let rho0 = projector(&initial_four_qubit(state.family, state.alpha));
    let coarse = integrate(&generator, &rho0, steps, dt)?;
    let fine = integrate(&generator, &rho0, 2 * steps, dt / 2.0)?;
    let drift = max_abs_diff(&coarse.rho, &fine.rho);
    if drift > REFINEMENT_TOL {
        return Err(Error::IntegrationFailure {
            time: t_max,
            reason: format!("step-halving drift {drift:e} exceeds {REFINEMENT_TOL:e}"),
        });
    }
    let rho = fine.rho;
    let min_eigenvalue = crate::hilbert::hermitian_eigenvalues(&rho).into_iter().fold(f64::INFINITY, f64::min);
    Ok(LindbladRun {
        generator_norm: max_abs(&generator.apply(&rho)),
        max_trace_error: coarse.max_trace_error.max(fine.max_trace_error),
        max_hermiticity_defect: coarse.max_herm.max(fine.max_herm),
        min_eigenvalue,
        refinement_drift: drift,
        rho,
    })
}

/// States at each of the increasing `times` (starting at or after zero), with
/// RK4 steps no longer than `dt` in between.
pub fn lindblad_trajectory(state: &PreparedState, rate: f64, times: &[f64], dt: f64) -> Result<Vec<ComplexMatrix>> {
    if !(rate > 0.0) {
        return Err(Error::invalid("Gamma must be positive"));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt must be positive"));
    }
    if times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("sample times must be non-negative and increasing"));
    }
    let generator = LindbladGenerator::new(rate);
    let mut rho = projector(&initial_four_qubit(state.family, state.alpha));
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let span = t - now;
        if span > 0.0 {
            let steps = (span / dt).ceil() as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                rho = generator.rk4(&rho, h);
            }
            if !max_abs(&rho).is_finite() || max_abs(&rho) > 1.0 + 1e-6 {
                return Err(Error::IntegrationFailure {
                    time: t,
                    reason: "Lindblad step is unstable; reduce dt".into(),
                });
            }
        }
        now = t;
        out.push(rho.clone());
    }
    Ok(out)
}

/// Defects of the long-time block pattern, with the 16×16 state split into
/// 4×4 blocks `[[a b c d] [e F G H] [i J K L] [m N O P]]` (outer index
/// `A1 B1`, inner index `A2 B2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockDefects {
    /// Largest entry of the first block row and column.
    pub first_row_col: f64,
    /// `F = K`, `F = -G`, `F = -J`.
    pub f_relations: f64,
    /// `H = -L`, `H = N†`, `H = -O†`.
    pub h_relations: f64,
    /// Zero rows/columns and `v, -v, w` pattern inside each non-vanishing block.
    pub sub_block_pattern: f64,
}

impl BlockDefects {
    pub fn max(&self) -> f64 {
        self.first_row_col.max(self.f_relations).max(self.h_relations).max(self.sub_block_pattern)
    }
}

pub fn block_defects(rho: &ComplexMatrix) -> BlockDefects {
    let block = |r: usize, c: usize| rho.view((4 * r, 4 * c), (4, 4)).into_owned();
    let mut first = 0.0_f64;
    for k in 0..4 {
        first = first.max(max_abs(&block(0, k))).max(max_abs(&block(k, 0)));
    }
    let (f, g, h) = (block(1, 1), block(1, 2), block(1, 3));
    let (j, k, l) = (block(2, 1), block(2, 2), block(2, 3));
    let (n, o) = (block(3, 1), block(3, 2));
    let f_rel = max_abs_diff(&f, &k).max(max_abs(&(&f + &g))).max(max_abs(&(&f + &j)));
    let h_rel = max_abs(&(&h + &l)).max(max_abs_diff(&h, &n.adjoint())).max(max_abs(&(&h + o.adjoint())));

    // Each non-vanishing block is [[0 0 0 0] [0 v -v w] [0 -v v -w] [0 w* -w* q]].
    let mut pattern = 0.0_f64;
    for r in 1..4 {
        for c in 1..4 {
            let m = block(r, c);
            for k in 0..4 {
                pattern = pattern.max(m[(0, k)].norm()).max(m[(k, 0)].norm());
            }
            pattern = pattern
                .max((m[(1, 1)] - m[(2, 2)]).norm())
                .max((m[(1, 1)] + m[(1, 2)]).norm())
                .max((m[(1, 1)] + m[(2, 1)]).norm())
                .max((m[(1, 3)] + m[(2, 3)]).norm())
                .max((m[(3, 1)] + m[(3, 2)]).norm());
        }
    }
    BlockDefects { first_row_col: first, f_relations: f_rel, h_relations: h_rel, sub_block_pattern: pattern }
}
