//! Invariant suites behind `entangle-net validate`.
//!
//! Each suite returns a list of [`Check`]s holding the worst defect seen and
//! the tolerance it is held to. Random instances come from a seeded generator,
//! so reports are reproducible.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{hermitian_eigenvalues, max_abs, max_abs_diff, unitarity_defect, Propagator};
use crate::model::{Family, ModelParams, PreparedState};
use crate::multimode::{block_defects, lindblad_evolve, steady_state_pair};
use crate::oracle::{double_jc_reduced_brute, v_operator_from_unitary, NetworkOracle};
use crate::{double_jc, tavis};

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Unitarity,
    Voperators,
    Oracle,
    Steady,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Unitarity, Suite::Voperators, Suite::Oracle, Suite::Steady];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Unitarity => "unitarity",
            Suite::Voperators => "voperators",
            Suite::Oracle => "oracle",
            Suite::Steady => "steady",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid(format!("suite: unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= tolerance` (NaN fails).
    pub fn at_most(suite: Suite, name: &str, measured: f64, tolerance: f64) -> Self {
        Self { suite, name: name.to_string(), measured, tolerance, passed: measured <= tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub fn run(suites: &[Suite], seed: u64) -> Result<Report> {
    let mut checks = Vec::new();
    for &suite in suites {
        checks.extend(run_suite(suite, seed)?);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report { seed, suites: suites.to_vec(), checks, passed })
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    match suite {
        Suite::Unitarity => unitarity(),
        Suite::Voperators => voperators(seed),
        Suite::Oracle => oracle(seed, 50),
        Suite::Steady => steady(),
    }
}

fn unitarity() -> Result<Vec<Check>> {
    let s = Suite::Unitarity;
    let mut jc = [0.0_f64; 3];
    let mut tc = [0.0_f64; 3];
    for fock_dim in [3, 5] {
        for ratio in [0.0, 0.8] {
            let params = ModelParams::new(1.0, ratio, fock_dim)?;
            let jc_brute = Propagator::new(&double_jc::jc_hamiltonian(&params))?;
            let tc_brute = Propagator::new(&tavis::tavis_hamiltonian(&params))?;
            let jc_n = double_jc::excitation_number(fock_dim);
            let tc_n = tavis::excitation_number(fock_dim);
            for tau in [0.3, 1.7, 6.2, 19.5] {
                let u = double_jc::jc_unitary(&params, tau);
                jc[0] = jc[0].max(unitarity_defect(&u));
                jc[1] = jc[1].max(max_abs_diff(&u, &jc_brute.unitary(tau)));
                jc[2] = jc[2].max(max_abs(&(&u * &jc_n - &jc_n * &u)));
                let u = tavis::tavis_unitary(&params, tau);
                tc[0] = tc[0].max(unitarity_defect(&u));
                tc[1] = tc[1].max(max_abs_diff(&u, &tc_brute.unitary(tau)));
                tc[2] = tc[2].max(max_abs(&(&u * &tc_n - &tc_n * &u)));
            }
        }
    }
    Ok(vec![
        Check::at_most(s, "jc_unitarity_defect", jc[0], 1e-12),
        Check::at_most(s, "jc_closed_form_vs_exponential", jc[1], 1e-9),
        Check::at_most(s, "jc_excitation_conservation", jc[2], 1e-12),
        Check::at_most(s, "tavis_unitarity_defect", tc[0], 1e-12),
        Check::at_most(s, "tavis_closed_form_vs_exponential", tc[1], 1e-9),
        Check::at_most(s, "tavis_excitation_conservation", tc[2], 1e-12),
    ])
}

/// Worst pairing, completeness and propagator defects of the V-table over
/// `points` random `(τ, N)` draws.
pub fn voperator_defects(seed: u64, points: usize) -> Result<[f64; 3]> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = [0.0_f64; 3];
    for _ in 0..points {
        let tau = rng.gen_range(0.0..20.0);
        let photons = rng.gen_range(0..=2usize);
        let ratio = rng.gen_range(0.0..1.0);
        let params = ModelParams::tavis(photons).with_omega_ratio(ratio);
        let table = tavis::VTable::at(tau, photons, &params);
        let u = tavis::tavis_unitary(&params, tau);
        let brute = Propagator::new(&tavis::tavis_hamiltonian(&params))?.unitary(tau / params.lambda);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let v = table.get(i, j, k, l);
                        out[0] = out[0].max((v.adjoint() - table.get(l, k, j, i)).camax());
                        let direct = v_operator_from_unitary(&brute, params.fock_dim, photons, [i, j, k, l]);
                        out[2] = out[2].max((v - direct).camax());
                        let from_closed = v_operator_from_unitary(&u, params.fock_dim, photons, [i, j, k, l]);
                        out[2] = out[2].max((v - from_closed).camax());
                    }
                }
                let sum = table.get(i, 0, 0, j) + table.get(i, 1, 1, j);
                let expected = if i == j { Matrix2::identity() } else { Matrix2::zeros() };
                out[1] = out[1].max((sum - expected).camax());
            }
        }
    }
    Ok(out)
}

fn voperators(seed: u64) -> Result<Vec<Check>> {
    let s = Suite::Voperators;
    let [pairing, completeness, propagator] = voperator_defects(seed, 10)?;
    Ok(vec![
        Check::at_most(s, "hermiticity_pairing", pairing, 1e-12),
        Check::at_most(s, "completeness", completeness, 1e-12),
        Check::at_most(s, "table_vs_propagator", propagator, 1e-9),
    ])
}

/// One randomized closed-form vs brute-force comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSample {
    pub family: Family,
    pub alpha: f64,
    pub tau: f64,
    pub photons: usize,
    pub omega_over_lambda: f64,
    pub same_error: f64,
    pub cross_error: f64,
    pub mirror_error: f64,
    pub double_jc_error: f64,
}

/// `count` random `(family, α, τ, N ≤ 2, ω/λ)` instances compared entrywise.
pub fn oracle_samples(seed: u64, count: usize) -> Result<Vec<OracleSample>> {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9);
    let draws: Vec<_> = (0..count)
        .map(|_| {
            let family = if rng.gen_bool(0.5) { Family::Phi } else { Family::Psi };
            (
                family,
                rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
                rng.gen_range(0.0..20.0),
                rng.gen_range(0..=2usize),
                rng.gen_range(0.0..1.0),
            )
        })
        .collect();
    draws
        .into_par_iter()
        .map(|(family, alpha, tau, photons, ratio)| {
            let state = PreparedState::new(family, alpha, photons)?;
            let params = ModelParams::tavis(photons).with_omega_ratio(ratio);
            let pairs = NetworkOracle::new(&params)?.evolve_symmetric(&state, tau)?;
            let same = tavis::rho_pair_same(&state, &params, tau);
            let cross = tavis::rho_pair_cross(&state, &params, tau);
            let jc_params = ModelParams::double_jc(photons).with_omega_ratio(ratio);
            let jc = double_jc::double_jc_reduced(&state, &jc_params, tau);
            let jc_brute = double_jc_reduced_brute(&state, &jc_params, tau)?;
            Ok(OracleSample {
                family,
                alpha,
                tau,
                photons,
                omega_over_lambda: ratio,
                same_error: max_abs_diff(&same, &pairs.same_a).max(max_abs_diff(&same, &pairs.same_b)),
                cross_error: max_abs_diff(&cross, &pairs.cross),
                mirror_error: max_abs_diff(&cross, &pairs.cross_mirror),
                double_jc_error: max_abs_diff(&jc, &jc_brute),
            })
        })
        .collect()
}

fn oracle(seed: u64, count: usize) -> Result<Vec<Check>> {
    let s = Suite::Oracle;
    let samples = oracle_samples(seed, count)?;
    let worst = |f: fn(&OracleSample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most(s, "tavis_same_pair", worst(|x| x.same_error), 1e-9),
        Check::at_most(s, "tavis_cross_pair", worst(|x| x.cross_error), 1e-9),
        Check::at_most(s, "tavis_cross_pair_mirror", worst(|x| x.mirror_error), 1e-9),
        Check::at_most(s, "double_jc_pair", worst(|x| x.double_jc_error), 1e-9),
    ])
}

/// Analytic vs Lindblad comparison for one preparation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyComparison {
    pub family: Family,
    pub alpha_deg: f64,
    pub same_error: f64,
    pub cross_error: f64,
    pub block_defect: f64,
    pub generator_norm: f64,
    pub trace_error: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
}

/// Markov-limit runs at `Γ = 1` to `Γt = 50` for the given angles and both
/// families.
pub fn steady_comparisons(angles_deg: &[f64]) -> Result<Vec<SteadyComparison>> {
    let cases: Vec<_> =
        [Family::Phi, Family::Psi].into_iter().flat_map(|f| angles_deg.iter().map(move |&a| (f, a))).collect();
    cases
        .into_par_iter()
        .map(|(family, alpha_deg)| {
            let state = PreparedState::from_degrees(family, alpha_deg, 0)?;
            let run = lindblad_evolve(&state, 1.0, 50.0, 0.01)?;
            let (same, cross) = run.pair_reductions();
            let analytic = steady_state_pair(state.alpha, family);
            let min_eig = hermitian_eigenvalues(&same)
                .into_iter()
                .chain(hermitian_eigenvalues(&cross))
                .fold(run.min_eigenvalue, f64::min);
            Ok(SteadyComparison {
                family,
                alpha_deg,
                same_error: max_abs_diff(&same, &analytic.rho_same),
                cross_error: max_abs_diff(&cross, &analytic.rho_cross),
                block_defect: block_defects(&run.rho).max(),
                generator_norm: run.generator_norm,
                trace_error: run.max_trace_error,
                hermiticity_defect: run.max_hermiticity_defect,
                min_eigenvalue: min_eig,
            })
        })
        .collect()
}

pub const STEADY_ANGLES_DEG: [f64; 5] = [15.0, 30.0, 45.0, 60.0, 75.0];

fn steady() -> Result<Vec<Check>> {
    let s = Suite::Steady;
    let runs = steady_comparisons(&STEADY_ANGLES_DEG)?;
    let worst = |f: fn(&SteadyComparison) -> f64| runs.iter().map(f).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most(s, "analytic_vs_lindblad_same_pair", worst(|r| r.same_error), 1e-6),
        Check::at_most(s, "analytic_vs_lindblad_cross_pair", worst(|r| r.cross_error), 1e-6),
        Check::at_most(s, "block_relations", worst(|r| r.block_defect), 1e-6),
        Check::at_most(s, "stationarity", worst(|r| r.generator_norm), 1e-8),
        Check::at_most(s, "trace_preservation", worst(|r| r.trace_error), 1e-9),
        Check::at_most(s, "hermiticity", worst(|r| r.hermiticity_defect), 1e-10),
        Check::at_most(s, "negativity", worst(|r| -r.min_eigenvalue), 1e-9),
    ])
}
