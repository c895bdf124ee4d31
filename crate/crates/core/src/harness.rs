//! Scenario files in, CSV/JSON out. The binary in `main.rs` is a thin clap
//! wrapper over these functions.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::concurrence_auto;
use crate::error::Error;
use crate::hilbert::ComplexMatrix;
use crate::model::{Family, PreparedState};
use crate::multimode::{self, lindblad_trajectory, pair_reductions, steady_concurrence, steady_state_pair};
use crate::sweep::{self, tau_grid, Dynamics, PairKind, SweepPoint, SweepSpec, SweepSummary};
use crate::validate::{self, Report, Suite};

/// CLI failure classes and their exit codes.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation(_) => 1,
            HarnessError::BadInput(_) => 2,
            HarnessError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for HarnessError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => HarnessError::BadInput(msg),
            e @ Error::IntegrationFailure { .. } => HarnessError::Numerical(e.to_string()),
        }
    }
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

fn bad(field: &str, msg: impl std::fmt::Display) -> HarnessError {
    HarnessError::BadInput(format!("{field}: {msg}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    DoubleJc,
    Tavis,
    MultimodeSteady,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    #[serde(rename = "Gamma")]
    pub gamma_total: f64,
    #[serde(rename = "gamma")]
    pub gamma_memory: f64,
    pub t_max: f64,
    pub dt: f64,
}

/// Angles in degrees, either listed or as an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaGrid {
    List(Vec<f64>),
    Range { start: f64, end: f64, step: f64 },
}

impl AlphaGrid {
    pub fn degrees(&self) -> HarnessResult<Vec<f64>> {
        let grid = match self {
            AlphaGrid::List(v) => v.clone(),
            AlphaGrid::Range { start, end, step } => {
                sweep::degree_grid(*start, *end, *step).map_err(|e| bad("alpha_grid", e))?
            }
        };
        if grid.is_empty() {
            return Err(bad("alpha_grid", "no angles"));
        }
        if let Some(a) = grid.iter().find(|a| !(0.0..=90.0).contains(*a)) {
            return Err(bad("alpha_grid", format!("angle {a} outside [0, 90]")));
        }
        Ok(grid)
    }
}

fn default_tau_max() -> f64 {
    20.0
}

fn default_tau_steps() -> i64 {
    4001
}

/// One experiment description, read from JSON.
///
/// For `multimode_steady`, the time axis is `Γt` and `bath` sets the rate and
/// step; `photons` and `omega_over_lambda` are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: ModelKind,
    pub family: Family,
    #[serde(default)]
    pub alpha_deg: Option<f64>,
    #[serde(default)]
    pub photons: i64,
    #[serde(default = "default_tau_max")]
    pub tau_max: f64,
    #[serde(default = "default_tau_steps")]
    pub tau_steps: i64,
    #[serde(default)]
    pub omega_over_lambda: f64,
    #[serde(default = "default_pair")]
    pub pair: PairKind,
    #[serde(default)]
    pub bath: Option<BathConfig>,
    #[serde(default)]
    pub alpha_grid: Option<AlphaGrid>,
    /// Append the real and imaginary parts of every pair-density entry to
    /// each curve row.
    #[serde(default)]
    pub emit_rho: bool,
}

fn default_pair() -> PairKind {
    PairKind::Same
}

impl Scenario {
    pub fn from_json(text: &str) -> HarnessResult<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| HarnessError::BadInput(format!("config: {e}")))?;
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> HarnessResult<()> {
        if self.photons < 0 {
            return Err(bad("photons", format!("{} is negative", self.photons)));
        }
        if self.tau_steps < 2 {
            return Err(bad("tau_steps", format!("{} is below 2", self.tau_steps)));
        }
        if !(self.tau_max > 0.0) || !self.tau_max.is_finite() {
            return Err(bad("tau_max", format!("{} is not positive", self.tau_max)));
        }
        if !self.omega_over_lambda.is_finite() {
            return Err(bad("omega_over_lambda", "not finite"));
        }
        if let Some(a) = self.alpha_deg {
            if !(0.0..=90.0).contains(&a) {
                return Err(bad("alpha_deg", format!("{a} outside [0, 90]")));
            }
        }
        if let Some(b) = &self.bath {
            multimode::BathParams::new(b.gamma_total, b.gamma_memory, 0.0).map_err(|e| bad("bath", e))?;
            if !(b.t_max > 0.0) || !(b.dt > 0.0) {
                return Err(bad("bath", "t_max and dt must be positive"));
            }
        }
        if self.model == ModelKind::DoubleJc && self.pair == PairKind::Cross {
            return Err(bad("pair", "the double_jc model only has the same pair"));
        }
        Ok(())
    }

    fn photons(&self) -> usize {
        self.photons as usize
    }

    fn alpha_deg(&self) -> HarnessResult<f64> {
        self.alpha_deg.ok_or_else(|| bad("alpha_deg", "required"))
    }

    fn dynamics(&self) -> Option<Dynamics> {
        match self.model {
            ModelKind::DoubleJc => Some(Dynamics::DoubleJc),
            ModelKind::Tavis => Some(Dynamics::Tavis),
            ModelKind::MultimodeSteady => None,
        }
    }

    fn bath_or_default(&self) -> BathConfig {
        self.bath.unwrap_or(BathConfig { gamma_total: 1.0, gamma_memory: 10.0, t_max: 50.0, dt: 0.01 })
    }
}

/// Formats a double with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn rho_header(out: &mut String) {
    for r in 1..=4 {
        for c in 1..=4 {
            let _ = write!(out, ",rho{r}{c}_re,rho{r}{c}_im");
        }
    }
}

fn rho_cells(out: &mut String, rho: &ComplexMatrix) {
    for r in 0..4 {
        for c in 0..4 {
            let z = rho[(r, c)];
            let _ = write!(out, ",{},{}", fmt_f64(z.re), fmt_f64(z.im));
        }
    }
}

/// Curve CSV: `tau,concurrence[,rho…]` for single-mode models and
/// `gamma_t,concurrence[,rho…]` for the multimode Markov-limit run.
pub fn run_curve(s: &Scenario) -> HarnessResult<String> {
    let alpha_deg = s.alpha_deg()?;
    let state = PreparedState::from_degrees(s.family, alpha_deg, s.photons()).map_err(|e| bad("alpha_deg", e))?;
    let grid = tau_grid(s.tau_max, s.tau_steps as usize)?;

    let rhos: Vec<ComplexMatrix> = match s.dynamics() {
        Some(dynamics) => {
            let params = dynamics.default_params(s.photons()).with_omega_ratio(s.omega_over_lambda);
            grid.par_iter()
                .map(|&tau| dynamics.pair_density(s.pair, &state, &params, tau))
                .collect::<crate::Result<_>>()?
        }
        None => {
            let bath = s.bath_or_default();
            let times: Vec<f64> = grid.iter().map(|t| t / bath.gamma_total).collect();
            lindblad_trajectory(&state, bath.gamma_total, &times, bath.dt)?
                .into_iter()
                .map(|rho| {
                    let (same, cross) = pair_reductions(&rho);
                    if s.pair == PairKind::Same {
                        same
                    } else {
                        cross
                    }
                })
                .collect()
        }
    };
    let values: Vec<f64> = rhos.par_iter().map(concurrence_auto).collect::<crate::Result<_>>()?;

    let mut out = String::new();
    out.push_str(if s.dynamics().is_some() { "tau,concurrence" } else { "gamma_t,concurrence" });
    if s.emit_rho {
        rho_header(&mut out);
    }
    out.push('\n');
    for ((tau, c), rho) in grid.iter().zip(&values).zip(&rhos) {
        out.push_str(&fmt_f64(*tau));
        out.push(',');
        out.push_str(&fmt_f64(*c));
        if s.emit_rho {
            rho_cells(&mut out, rho);
        }
        out.push('\n');
    }
    Ok(out)
}

/// Summary file written next to a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub model: ModelKind,
    pub family: Family,
    pub photons: usize,
    #[serde(flatten)]
    pub summary: SweepSummary,
}

/// Sweep CSV `alpha_deg,e_min` plus its summary. For `multimode_steady` the
/// column holds the long-time concurrence.
pub fn run_sweep(s: &Scenario) -> HarnessResult<(String, SweepReport)> {
    let grid_deg = s.alpha_grid.as_ref().ok_or_else(|| bad("alpha_grid", "required"))?.degrees()?;
    let grid: Vec<f64> = grid_deg.iter().map(|a| a.to_radians()).collect();

    let (points, summary) = match s.dynamics() {
        Some(dynamics) => {
            let spec = SweepSpec {
                dynamics,
                family: s.family,
                photons: s.photons(),
                tau_max: s.tau_max,
                tau_steps: s.tau_steps as usize,
                params: dynamics.default_params(s.photons()).with_omega_ratio(s.omega_over_lambda),
            };
            if s.pair == PairKind::Cross {
                return Err(bad("pair", "sweeps follow the same pair"));
            }
            let points = sweep::min_entanglement_sweep(&spec, &grid)?;
            let summary = spec.summarize(&points)?;
            (points, summary)
        }
        None => {
            let f = |alpha: f64| steady_concurrence(alpha, s.family);
            let points: Vec<SweepPoint> =
                grid.iter().map(|&alpha| SweepPoint { alpha, e_min: f(alpha), tau_at_min: f64::INFINITY }).collect();
            let summary = sweep::summarize(&points, |a| Ok(f(a)))?;
            (points, summary)
        }
    };

    let mut csv = String::from("alpha_deg,e_min\n");
    for (deg, p) in grid_deg.iter().zip(&points) {
        let _ = writeln!(csv, "{},{}", fmt_f64(*deg), fmt_f64(p.e_min));
    }
    Ok((csv, SweepReport { model: s.model, family: s.family, photons: s.photons(), summary }))
}

/// JSON body of `entangle-net steady`.
#[derive(Debug, Clone, Serialize)]
pub struct SteadyReport {
    pub family: Family,
    pub alpha_deg: f64,
    pub y: f64,
    pub x_abs: f64,
    pub concurrence_same: f64,
    pub concurrence_cross: f64,
    /// Row-major `[re, im]` pairs.
    pub rho_same: Vec<Vec<[f64; 2]>>,
    pub rho_cross: Vec<Vec<[f64; 2]>>,
}

fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

pub fn run_steady(family: Family, alpha_deg: f64) -> HarnessResult<SteadyReport> {
    if !(0.0..=90.0).contains(&alpha_deg) {
        return Err(bad("alpha_deg", format!("{alpha_deg} outside [0, 90]")));
    }
    let s = steady_state_pair(alpha_deg.to_radians(), family);
    Ok(SteadyReport {
        family,
        alpha_deg,
        y: s.y,
        x_abs: s.x_abs,
        concurrence_same: concurrence_auto(&s.rho_same)?,
        concurrence_cross: concurrence_auto(&s.rho_cross)?,
        rho_same: matrix_rows(&s.rho_same),
        rho_cross: matrix_rows(&s.rho_cross),
    })
}

/// Runs the requested suites. A failing check is reported in the returned
/// [`Report`], not as an error; the caller decides the exit code.
pub fn run_validate(suites: &[Suite], seed: u64) -> HarnessResult<Report> {
    Ok(validate::run(suites, seed)?)
}

/// Sizes the global rayon pool from `ENTANGLE_NET_THREADS` (unset or empty
/// means the default).
pub fn configure_threads(var: Option<&str>) -> HarnessResult<()> {
    let Some(raw) = var.map(str::trim).filter(|v| !v.is_empty()) else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| bad("ENTANGLE_NET_THREADS", format!("`{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| bad("ENTANGLE_NET_THREADS", e))
}
