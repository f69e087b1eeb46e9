//! Second-order controlled-phase gate between two neighbouring plaquettes.
//!
//! The superplaquette has eight sites: the left plaquette `1..4` on bits
//! 0..3 and the right plaquette `1'..4'` on bits 4..7. The plaquettes are
//! joined by `J' (s2.s1' + s3.s4')`.
//!
//! Effective two-qubit operators act on the basis `|a_L a_R>` with index
//! `a_L + 2 a_R`; for the `{box, cross}` encoding `a = 0` is the cross state
//! (`sigma_z = +1`, upper singlet) and `a = 1` the box state.

mod coeffs;
mod effective;
mod gate;
mod sweep;

pub use coeffs::{allowed_ratios, effective_coeffs, gate_time, AllowedRatio, Branch, EffectiveCoeffs};
pub use effective::{
    effective_hamiltonian, embed_two_qubit, encoded_isometry, validate_effective, EffectiveForm, Encoding,
};
pub use gate::{
    echo_gate, echo_gate_at, echo_pulse, gate_fidelity, gate_fidelity_at, superplaquette_hamiltonian, target_gate,
    EchoPulse, GateReport, GateTarget,
};
pub use sweep::{achievable_fidelity_limit, fidelity_sweep, in_shadow_region, SweepRow, SHADOW_THRESHOLD};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PertError {
    #[error(transparent)]
    Spin(#[from] spin_core::SpinError),
    #[error(transparent)]
    Plaquette(#[from] plaquette::PlaquetteError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("d/J = {0} is a pole of the effective coefficients")]
    Pole(f64),
    #[error("lambda_z equals 1/8 (d/J = {0}); no Ising phase accumulates")]
    NoGate(f64),
    #[error("no allowed ratio in (0,1) for n = {n}, m = {m}")]
    NoRoot { n: u32, m: u32 },
    #[error("effective form `{0}` requires d = J")]
    FormMismatch(&'static str),
}

pub type Result<T> = std::result::Result<T, PertError>;

/// Superplaquette parameters: ring coupling `j`, diagonal coupling `d`,
/// inter-plaquette coupling `jp`, gate index `n` and phase-matching index `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PertParams {
    pub j: f64,
    pub d: f64,
    pub jp: f64,
    pub n: u32,
    pub m: u32,
}

impl PertParams {
    /// Requires `J > 0`, `0 < d <= J`, `J' >= 0`, `n, m >= 1`.
    pub fn new(j: f64, d: f64, jp: f64, n: u32, m: u32) -> Result<Self> {
        if !(j > 0.0) || !j.is_finite() {
            return Err(PertError::Params(format!("J must be positive, got {j}")));
        }
        if !(d > 0.0 && d <= j) {
            return Err(PertError::Params(format!("need 0 < d <= J, got d = {d}, J = {j}")));
        }
        if !(jp >= 0.0) || !jp.is_finite() {
            return Err(PertError::Params(format!("J' must be non-negative, got {jp}")));
        }
        if n == 0 || m == 0 {
            return Err(PertError::Params("n and m start at 1".into()));
        }
        Ok(Self { j, d, jp, n, m })
    }

    /// Dimensionless ratios `(d/J, J'/J)` with `J = 1`.
    pub fn from_ratios(d_over_j: f64, jp_over_j: f64, n: u32) -> Result<Self> {
        Self::new(1.0, d_over_j, jp_over_j, n, 1)
    }

    pub fn ratio(&self) -> f64 {
        self.d / self.j
    }

    /// Smallest intra-plaquette gap that `J'` must stay well below.
    pub fn smallest_gap(&self) -> f64 {
        (4.0 * self.d).min(8.0 * (self.j - self.d)).min(4.0 * (self.j - 2.0 * self.d).abs())
    }

    /// Warning text when `J'` exceeds a tenth of the smallest gap, or `d = J`.
    pub fn validity_warning(&self) -> Option<String> {
        if (self.d - self.j).abs() < 1e-12 {
            return Some("d = J: singlets degenerate, rotating-wave form not justified".into());
        }
        let gap = self.smallest_gap();
        (self.jp > 0.1 * gap).then(|| format!("J' = {} is not small against the gap {gap}", self.jp))
    }
}
