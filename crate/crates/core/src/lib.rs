//! Exact entanglement dynamics for double Jaynes-Cummings networks.
//!
//! The crate covers three models:
//!
//! * [`double_jc`]: one atom per cavity, two cavities;
//! * [`tavis`]: two atoms per cavity, two cavities, with closed-form pair
//!   densities checked against the brute-force pipeline in [`oracle`];
//! * [`multimode`]: the Lorentzian-bath extension, its coefficient ODEs, the
//!   analytic long-time pair states and a Markov-limit Lindblad integrator.

// `!(x > 0.0)` is used on purpose so NaN is rejected alongside non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod double_jc;
pub mod entanglement;
pub mod error;
pub mod harness;
pub mod hilbert;
pub mod model;
pub mod multimode;
pub mod oracle;
pub mod sweep;
pub mod tavis;
pub mod validate;

pub use error::{Error, Result};
pub use model::{Family, ModelParams, PreparedState};
