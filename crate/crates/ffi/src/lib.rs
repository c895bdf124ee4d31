//! C ABI over `entangle-net`.
//!
//! Every function returns an [`EnStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be copied out with
//! [`en_last_error_message`]. Handles are opaque and must be released with
//! their `_free` function. Angles cross the boundary in degrees.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entangle_net::entanglement::concurrence;
use entangle_net::hilbert::ComplexMatrix;
use entangle_net::multimode::steady_state_pair;
use entangle_net::sweep::{min_entanglement_sweep, Dynamics, PairKind, SweepPoint, SweepSpec, SweepSummary};
use entangle_net::tavis::coefficient_set;
use entangle_net::{Error, Family, ModelParams, PreparedState};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IntegrationFailure = 3,
    /// A sweep handle was queried before `en_sweep_run`.
    NotReady = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnFamily {
    Phi = 0,
    Psi = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnDynamics {
    DoubleJc = 0,
    Tavis = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnPair {
    Same = 0,
    Cross = 1,
}

impl From<EnFamily> for Family {
    fn from(f: EnFamily) -> Self {
        match f {
            EnFamily::Phi => Family::Phi,
            EnFamily::Psi => Family::Psi,
        }
    }
}

impl From<EnDynamics> for Dynamics {
    fn from(d: EnDynamics) -> Self {
        match d {
            EnDynamics::DoubleJc => Dynamics::DoubleJc,
            EnDynamics::Tavis => Dynamics::Tavis,
        }
    }
}

impl From<EnPair> for PairKind {
    fn from(p: EnPair) -> Self {
        match p {
            EnPair::Same => PairKind::Same,
            EnPair::Cross => PairKind::Cross,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(EnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidArgument(_) => EnStatus::InvalidArgument,
            Error::IntegrationFailure { .. } => EnStatus::IntegrationFailure,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(EnStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, records any failure message and converts panics to
/// [`EnStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EnStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            EnStatus::Panic
        }
    }
}

/// Writes `value` through `out`, failing on null.
unsafe fn put<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length
/// excluding the terminator, or 0 when there is none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn en_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn en_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// One single-mode model with a prepared initial state.
pub struct EnModel {
    dynamics: Dynamics,
    state: PreparedState,
    params: ModelParams,
}

/// Creates a model. `photons` is the Fock level of every cavity; the
/// truncation is chosen automatically.
///
/// # Safety
/// `out` must be null or valid for writes. The handle written there must be
/// released with [`en_model_free`].
#[no_mangle]
pub unsafe extern "C" fn en_model_new(
    dynamics: EnDynamics,
    family: EnFamily,
    alpha_deg: f64,
    photons: u32,
    omega_over_lambda: f64,
    out: *mut *mut EnModel,
) -> EnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if !omega_over_lambda.is_finite() {
            return Err(Failure(EnStatus::InvalidArgument, "omega_over_lambda must be finite".into()));
        }
        let dynamics = Dynamics::from(dynamics);
        let state = PreparedState::from_degrees(family.into(), alpha_deg, photons as usize)?;
        let params = dynamics.default_params(photons as usize).with_omega_ratio(omega_over_lambda);
        out.write(Box::into_raw(Box::new(EnModel { dynamics, state, params })));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from [`en_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn en_model_free(model: *mut EnModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

unsafe fn model_ref<'a>(model: *const EnModel) -> Result<&'a EnModel, Failure> {
    model.as_ref().ok_or_else(|| null("model"))
}

/// Writes the 4×4 pair density at `τ` row-major into `re[16]` and `im[16]`.
///
/// # Safety
/// `model` must be a live handle; `re` and `im` must each hold 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn en_model_pair_density(
    model: *const EnModel,
    pair: EnPair,
    tau: f64,
    re: *mut f64,
    im: *mut f64,
) -> EnStatus {
    guard(|| {
        let m = model_ref(model)?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let rho = m.dynamics.pair_density(pair.into(), &m.state, &m.params, tau)?;
        for r in 0..4 {
            for c in 0..4 {
                *re.add(4 * r + c) = rho[(r, c)].re;
                *im.add(4 * r + c) = rho[(r, c)].im;
            }
        }
        Ok(())
    })
}

/// Concurrence of the pair at `τ`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn en_model_concurrence(
    model: *const EnModel,
    pair: EnPair,
    tau: f64,
    out: *mut f64,
) -> EnStatus {
    guard(|| {
        let m = model_ref(model)?;
        let c = m.dynamics.concurrence(pair.into(), &m.state, &m.params, tau)?;
        put(out, "out", c)
    })
}

/// Wootters concurrence of a two-qubit density matrix given row-major as
/// `re[16]`, `im[16]`.
///
/// # Safety
/// `re` and `im` must each hold 16 doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn en_concurrence(re: *const f64, im: *const f64, out: *mut f64) -> EnStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let rho = ComplexMatrix::from_fn(4, 4, |r, c| Complex64::new(*re.add(4 * r + c), *im.add(4 * r + c)));
        put(out, "out", concurrence(&rho)?)
    })
}

/// The thirteen coefficient functions `a b c d f h k l m n p q r` at `τ` for
/// a cavity in `|photons>`.
///
/// # Safety
/// `out` must hold 13 doubles.
#[no_mangle]
pub unsafe extern "C" fn en_coefficients(tau: f64, photons: u32, out: *mut f64) -> EnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if !tau.is_finite() {
            return Err(Failure(EnStatus::InvalidArgument, "tau must be finite".into()));
        }
        for (k, v) in coefficient_set(tau, photons as usize).values().into_iter().enumerate() {
            *out.add(k) = v;
        }
        Ok(())
    })
}

/// Long-time multimode pair state parameters `y`, `|x|` and the concurrence
/// shared by the same and cross pairs.
///
/// # Safety
/// The three out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn en_steady_state(
    family: EnFamily,
    alpha_deg: f64,
    y: *mut f64,
    x_abs: *mut f64,
    concurrence_out: *mut f64,
) -> EnStatus {
    guard(|| {
        if !(0.0..=90.0).contains(&alpha_deg) {
            return Err(Failure(EnStatus::InvalidArgument, format!("alpha_deg {alpha_deg} outside [0, 90]")));
        }
        let s = steady_state_pair(alpha_deg.to_radians(), family.into());
        let c = concurrence(&s.rho_same)?;
        put(y, "y", s.y)?;
        put(x_abs, "x_abs", s.x_abs)?;
        put(concurrence_out, "concurrence", c)
    })
}

/// Minimum-entanglement scan of the two-atom-per-cavity network.
pub struct EnSweep {
    spec: SweepSpec,
    points: Option<Vec<SweepPoint>>,
    summary: Option<SweepSummary>,
}

/// Creates a sweep over `τ ∈ [0, tau_max]` on `tau_steps` points.
///
/// # Safety
/// `out` must be valid for writes; release the handle with [`en_sweep_free`].
#[no_mangle]
pub unsafe extern "C" fn en_sweep_new(
    family: EnFamily,
    photons: u32,
    tau_max: f64,
    tau_steps: usize,
    out: *mut *mut EnSweep,
) -> EnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        entangle_net::sweep::tau_grid(tau_max, tau_steps)?;
        let mut spec = SweepSpec::tavis(family.into(), photons as usize);
        spec.tau_max = tau_max;
        spec.tau_steps = tau_steps;
        out.write(Box::into_raw(Box::new(EnSweep { spec, points: None, summary: None })));
        Ok(())
    })
}

/// # Safety
/// `sweep` must be null or a handle from [`en_sweep_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn en_sweep_free(sweep: *mut EnSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Evaluates `E_min` at each of the `len` angles (degrees) and the summary.
/// Replaces the results of any earlier run.
///
/// # Safety
/// `sweep` must be a live handle; `alphas_deg` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn en_sweep_run(sweep: *mut EnSweep, alphas_deg: *const f64, len: usize) -> EnStatus {
    guard(|| {
        let s = sweep.as_mut().ok_or_else(|| null("sweep"))?;
        if alphas_deg.is_null() {
            return Err(null("alphas_deg"));
        }
        let degrees = std::slice::from_raw_parts(alphas_deg, len);
        if let Some(a) = degrees.iter().find(|a| !(0.0..=90.0).contains(*a)) {
            return Err(Failure(EnStatus::InvalidArgument, format!("alpha {a} outside [0, 90]")));
        }
        let grid: Vec<f64> = degrees.iter().map(|a| a.to_radians()).collect();
        let points = min_entanglement_sweep(&s.spec, &grid)?;
        s.summary = Some(s.spec.summarize(&points)?);
        s.points = Some(points);
        Ok(())
    })
}

unsafe fn sweep_points<'a>(sweep: *const EnSweep) -> Result<(&'a [SweepPoint], &'a SweepSummary), Failure> {
    let s = sweep.as_ref().ok_or_else(|| null("sweep"))?;
    match (&s.points, &s.summary) {
        (Some(p), Some(sum)) => Ok((p, sum)),
        _ => Err(Failure(EnStatus::NotReady, "sweep has not been run".into())),
    }
}

/// Number of evaluated angles.
///
/// # Safety
/// `sweep` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn en_sweep_len(sweep: *const EnSweep, out: *mut usize) -> EnStatus {
    guard(|| put(out, "out", sweep_points(sweep)?.0.len()))
}

/// Angle (degrees), `E_min` and the `τ` of the minimum for entry `index`.
///
/// # Safety
/// `sweep` must be a live handle; the out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn en_sweep_get(
    sweep: *const EnSweep,
    index: usize,
    alpha_deg: *mut f64,
    e_min: *mut f64,
    tau_at_min: *mut f64,
) -> EnStatus {
    guard(|| {
        let (points, _) = sweep_points(sweep)?;
        let p = points
            .get(index)
            .ok_or_else(|| Failure(EnStatus::InvalidArgument, format!("index {index} out of range")))?;
        put(alpha_deg, "alpha_deg", p.alpha.to_degrees())?;
        put(e_min, "e_min", p.e_min)?;
        put(tau_at_min, "tau_at_min", p.tau_at_min)
    })
}

/// Refined preservation threshold (degrees) and the best angle with its
/// `E_min`. `found` is set to 0 and the threshold to NaN when no angle keeps
/// entanglement.
///
/// # Safety
/// `sweep` must be a live handle; the out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn en_sweep_summary(
    sweep: *const EnSweep,
    found: *mut i32,
    threshold_deg: *mut f64,
    argmax_deg: *mut f64,
    max_e_min: *mut f64,
) -> EnStatus {
    guard(|| {
        let (_, sum) = sweep_points(sweep)?;
        put(found, "found", sum.threshold_alpha_refined_deg.is_some() as i32)?;
        put(threshold_deg, "threshold_deg", sum.threshold_alpha_refined_deg.unwrap_or(f64::NAN))?;
        put(argmax_deg, "argmax_deg", sum.argmax_alpha_deg)?;
        put(max_e_min, "max_e_min", sum.max_e_min)
    })
}
