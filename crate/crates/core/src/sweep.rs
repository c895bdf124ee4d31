//! Concurrence curves and minimum-entanglement scans over the preparation
//! angle.

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::concurrence_auto;
use crate::error::{Error, Result};
use crate::hilbert::ComplexMatrix;
use crate::model::{Family, ModelParams, PreparedState};
use crate::{double_jc, tavis};

/// Concurrences at or below this value count as "no entanglement".
pub const ZERO_ENTANGLEMENT: f64 = 1e-6;

/// Which pair of qubits a curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    /// `A1 A2` (equivalently `B1 B2`).
    Same,
    /// `A1 B2` (equivalently `A2 B1`).
    Cross,
}

/// Single-mode models that produce a pair density at a given `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    DoubleJc,
    Tavis,
}

impl Dynamics {
    pub fn default_params(self, photons: usize) -> ModelParams {
        match self {
            Dynamics::DoubleJc => ModelParams::double_jc(photons),
            Dynamics::Tavis => ModelParams::tavis(photons),
        }
    }

    pub fn pair_density(
        self,
        pair: PairKind,
        state: &PreparedState,
        params: &ModelParams,
        tau: f64,
    ) -> Result<ComplexMatrix> {
        match (self, pair) {
            (Dynamics::DoubleJc, PairKind::Same) => Ok(double_jc::double_jc_reduced(state, params, tau)),
            (Dynamics::DoubleJc, PairKind::Cross) => {
                Err(Error::invalid("pair: the double JC model only has the A1 A2 pair"))
            }
            (Dynamics::Tavis, PairKind::Same) => Ok(tavis::rho_pair_same(state, params, tau)),
            (Dynamics::Tavis, PairKind::Cross) => Ok(tavis::rho_pair_cross(state, params, tau)),
        }
    }

    pub fn concurrence(self, pair: PairKind, state: &PreparedState, params: &ModelParams, tau: f64) -> Result<f64> {
        concurrence_auto(&self.pair_density(pair, state, params, tau)?)
    }
}

/// `steps` uniformly spaced points covering `[0, tau_max]`.
pub fn tau_grid(tau_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::invalid("tau_steps must be at least 2"));
    }
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(Error::invalid("tau_max must be positive"));
    }
    let h = tau_max / (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 * h).collect())
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum of a concurrence curve over a grid, polished by golden-section
/// search in the cells adjacent to the best grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveMinimum {
    pub tau: f64,
    pub value: f64,
}

pub fn curve_minimum(f: impl Fn(f64) -> f64, grid: &[f64]) -> CurveMinimum {
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let (best, &value) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty grid");
    let mut min = CurveMinimum { tau: grid[best], value };
    if value > 0.0 {
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let (tau, polished) = golden_section_min(&f, lo, hi, 1e-10);
        if polished < min.value {
            min = CurveMinimum { tau, value: polished };
        }
    }
    min
}

/// One row of a minimum-entanglement scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    /// Angle in radians.
    pub alpha: f64,
    pub e_min: f64,
    pub tau_at_min: f64,
}

/// Scan setup for [`min_entanglement_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub dynamics: Dynamics,
    pub family: Family,
    pub photons: usize,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub params: ModelParams,
}

impl SweepSpec {
    /// Tavis network defaults: `τ ∈ [0, 20]` on 4001 points.
    pub fn tavis(family: Family, photons: usize) -> Self {
        Self {
            dynamics: Dynamics::Tavis,
            family,
            photons,
            tau_max: 20.0,
            tau_steps: 4001,
            params: ModelParams::tavis(photons),
        }
    }

    pub fn e_min(&self, alpha: f64) -> Result<SweepPoint> {
        let grid = tau_grid(self.tau_max, self.tau_steps)?;
        let state = PreparedState::new(self.family, alpha, self.photons)?;
        let f = |tau: f64| {
            self.dynamics
                .concurrence(PairKind::Same, &state, &self.params, tau)
                .expect("closed-form pair densities are valid density matrices")
        };
        let min = curve_minimum(f, &grid);
        Ok(SweepPoint { alpha, e_min: min.value, tau_at_min: min.tau })
    }
}

/// `E_min(α) = min_τ C(ρ_A1A2(τ))` for every angle in `alpha_grid`
/// (radians). Angles are evaluated in parallel; the output keeps the input
/// order.
pub fn min_entanglement_sweep(spec: &SweepSpec, alpha_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    if alpha_grid.is_empty() {
        return Err(Error::invalid("alpha grid is empty"));
    }
    tau_grid(spec.tau_max, spec.tau_steps)?;
    alpha_grid.par_iter().map(|&alpha| spec.e_min(alpha)).collect()
}

/// Degrees grid `start, start + step, …` up to and including `end`.
pub fn degree_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || end < start {
        return Err(Error::invalid("alpha grid needs step > 0 and end >= start"));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// Threshold and optimum read off a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    /// Smallest grid angle (degrees) with `E_min > ZERO_ENTANGLEMENT`.
    pub threshold_alpha_deg: Option<f64>,
    /// Threshold refined by bisection between the neighbouring grid angles.
    pub threshold_alpha_refined_deg: Option<f64>,
    pub argmax_alpha_deg: f64,
    pub max_e_min: f64,
}

/// Reads the threshold and optimum off `points`; `e_min` re-evaluates the
/// curve minimum at an arbitrary angle (radians) for the threshold bisection.
pub fn summarize(points: &[SweepPoint], e_min: impl Fn(f64) -> Result<f64>) -> Result<SweepSummary> {
    let best = points.iter().max_by(|a, b| a.e_min.total_cmp(&b.e_min)).ok_or_else(|| Error::invalid("empty sweep"))?;
    let first_alive = points.iter().position(|p| p.e_min > ZERO_ENTANGLEMENT);
    let threshold = first_alive.map(|i| points[i].alpha.to_degrees());
    let refined = match first_alive {
        Some(i) if i > 0 => Some(refine_threshold(&e_min, points[i - 1].alpha, points[i].alpha)?.to_degrees()),
        Some(i) => Some(points[i].alpha.to_degrees()),
        None => None,
    };
    Ok(SweepSummary {
        threshold_alpha_deg: threshold,
        threshold_alpha_refined_deg: refined,
        argmax_alpha_deg: best.alpha.to_degrees(),
        max_e_min: best.e_min,
    })
}

impl SweepSpec {
    pub fn summarize(&self, points: &[SweepPoint]) -> Result<SweepSummary> {
        summarize(points, |alpha| Ok(self.e_min(alpha)?.e_min))
    }
}

/// Bisection on `e_min(α) > ZERO_ENTANGLEMENT` between a dead angle and a
/// live one, to 1e-4 degrees.
pub fn refine_threshold(e_min: impl Fn(f64) -> Result<f64>, mut dead: f64, mut alive: f64) -> Result<f64> {
    while (alive - dead).abs() > 1e-4_f64.to_radians() {
        let mid = 0.5 * (dead + alive);
        if e_min(mid)? > ZERO_ENTANGLEMENT {
            alive = mid;
        } else {
            dead = mid;
        }
    }
    Ok(alive)
}
