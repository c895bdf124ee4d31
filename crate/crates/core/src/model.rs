//! Initial-state and model-parameter descriptors shared by the dynamics modules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{basis, kron_vec, real, ComplexVector, EXCITED, GROUND};

/// Which two-qubit partially entangled state a pair starts in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `cos α |e,e> + sin α |g,g>`
    Phi,
    /// `cos α |e,g> + sin α |g,e>`
    Psi,
}

impl Family {
    /// Level of the second qubit paired with level `level` of the first one.
    pub fn partner(self, level: usize) -> usize {
        match self {
            Family::Phi => level,
            Family::Psi => 1 - level,
        }
    }

    /// Two-qubit state vector in the `(first, second)` ordering.
    pub fn pair_vector(self, alpha: f64) -> ComplexVector {
        let (ca, sa) = (alpha.cos(), alpha.sin());
        let ket = |x: usize, y: usize| kron_vec(&basis(2, x), &basis(2, y));
        ket(EXCITED, self.partner(EXCITED)) * real(ca) + ket(GROUND, self.partner(GROUND)) * real(sa)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Phi => "phi",
            Family::Psi => "psi",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi" => Ok(Family::Phi),
            "psi" => Ok(Family::Psi),
            other => Err(Error::invalid(format!("unknown family '{other}', expected phi or psi"))),
        }
    }
}

/// Symmetric preparation: every entangled pair in the same family with the
/// same angle, every cavity in the Fock state `|photons>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparedState {
    pub family: Family,
    /// Mixing angle in radians, within `[0, π/2]`.
    pub alpha: f64,
    pub photons: usize,
}

impl PreparedState {
    pub fn new(family: Family, alpha: f64, photons: usize) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&alpha) {
            return Err(Error::invalid(format!("alpha {alpha} outside [0, pi/2]")));
        }
        Ok(Self { family, alpha, photons })
    }

    pub fn from_degrees(family: Family, alpha_deg: f64, photons: usize) -> Result<Self> {
        if !(0.0..=90.0).contains(&alpha_deg) {
            return Err(Error::invalid(format!("alpha_deg {alpha_deg} outside [0, 90]")));
        }
        Self::new(family, alpha_deg.to_radians(), photons)
    }

    /// Amplitudes `s_1 = cos α`, `s_2 = sin α`.
    pub fn amplitudes(&self) -> [f64; 2] {
        [self.alpha.cos(), self.alpha.sin()]
    }
}

/// Identical, resonant atom-cavity couplings.
///
/// Time enters the public API as the dimensionless `τ = λt`, so only the ratio
/// `ω/λ` matters. Detuning is always zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Coupling rate λ.
    pub lambda: f64,
    /// Mode (and atomic) angular frequency ω.
    pub omega: f64,
    /// Number of retained Fock levels per cavity.
    pub fock_dim: usize,
}

impl ModelParams {
    pub fn new(lambda: f64, omega: f64, fock_dim: usize) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid("lambda must be positive"));
        }
        if !omega.is_finite() {
            return Err(Error::invalid("omega must be finite"));
        }
        if fock_dim < 2 {
            return Err(Error::invalid("fock_dim must be at least 2"));
        }
        Ok(Self { lambda, omega, fock_dim })
    }

    /// One atom per cavity: `N + 2` levels hold every reachable photon number.
    pub fn double_jc(photons: usize) -> Self {
        Self { lambda: 1.0, omega: 0.0, fock_dim: photons + 2 }
    }

    /// Two atoms per cavity: `N + 3` levels.
    pub fn tavis(photons: usize) -> Self {
        Self { lambda: 1.0, omega: 0.0, fock_dim: photons + 3 }
    }

    pub fn with_omega_ratio(mut self, omega_over_lambda: f64) -> Self {
        self.omega = omega_over_lambda * self.lambda;
        self
    }

    pub fn omega_ratio(&self) -> f64 {
        self.omega / self.lambda
    }

    /// Free phase `γ = ωt` accumulated by the dimensionless time `tau`.
    pub fn phase(&self, tau: f64) -> f64 {
        self.omega_ratio() * tau
    }
}
