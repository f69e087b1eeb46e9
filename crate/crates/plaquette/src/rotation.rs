use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};
use spin_core::{unitary_evolve, DenseOperator, StateVector, C64};

use crate::{heisenberg_plaquette, logical_basis, BlochAxis, PlaquetteCouplings, PlaquetteError, Result};

pub type Logical2 = Matrix2<C64>;

/// `P^dag op P` in the orthonormal `(|0>, |1>)` basis.
pub fn logical_restriction(op: &DenseOperator) -> Result<Logical2> {
    if op.dim() != 16 {
        return Err(PlaquetteError::NotPlaquette(op.dim()));
    }
    let iso = logical_basis().isometry();
    let m = iso.adjoint() * op.matrix() * &iso;
    Ok(Logical2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
}

/// Coefficients `(c0, cx, cy, cz)` of `m = c0 1 + c . sigma`.
pub fn pauli_components(m: &Logical2) -> [C64; 4] {
    let half = C64::new(0.5, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        (m[(0, 0)] + m[(1, 1)]) * half,
        (m[(0, 1)] + m[(1, 0)]) * half,
        (m[(1, 0)] - m[(0, 1)]) * half * i * C64::new(-1.0, 0.0),
        (m[(0, 0)] - m[(1, 1)]) * half,
    ]
}

/// A finite-duration superexchange pulse on one plaquette.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationPulse {
    pub couplings: PlaquetteCouplings,
    pub duration: f64,
}

/// Pulse realizing `exp(-i axis.sigma angle)` (up to global phase) from horizontal and
/// vertical bonds, for axes in the cone between the horizontal and vertical axes.
/// The larger of `J_H`, `J_V` is normalized to 1.
pub fn rotation_pulse(axis: &BlochAxis, angle: f64) -> Option<RotationPulse> {
    let [x, y, z] = axis.components();
    if y.abs() > 1e-12 {
        return None;
    }
    // a n_H + b n_V = s (x, 0, z)
    let a = 2.0 * x / 3f64.sqrt();
    let b = z + x / 3f64.sqrt();
    if a < -1e-15 || b < -1e-15 {
        return None;
    }
    let (a, b) = (a.max(0.0), b.max(0.0));
    let scale = a.max(b);
    let (j_h, j_v) = (a / scale, b / scale);
    // logical generator: const + 4 (J_H n_H + J_V n_V) . sigma, with |J_H n_H + J_V n_V| = 1/scale
    let strength = 4.0 / scale;
    let theta = angle.rem_euclid(std::f64::consts::PI);
    Some(RotationPulse { couplings: PlaquetteCouplings::rect(j_h, j_v), duration: theta / strength })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepareMode {
    TwoStep,
    OneStep,
}

#[derive(Debug, Clone)]
pub struct PreparedState {
    pub state: StateVector,
    /// `|<+|psi>|^2`.
    pub fidelity: f64,
    /// `|(1 - P) psi|^2`.
    pub leakage: f64,
}

/// Evolve `|0>` through the listed `(axis, angle)` rotations, each as a 16-dim pulse.
pub fn prepare_with_rotations(steps: &[(BlochAxis, f64)]) -> Result<PreparedState> {
    let basis = logical_basis();
    let mut psi = basis.ket0.clone();
    for (axis, angle) in steps {
        let pulse = rotation_pulse(axis, *angle).ok_or(PlaquetteError::CollinearAxes)?;
        let u = unitary_evolve(&heisenberg_plaquette(&pulse.couplings), pulse.duration)?;
        psi = u.apply(&psi);
    }
    let fidelity = basis.ket_plus().overlap_sqr(&psi);
    let inside = basis.logical_projector.apply(&psi);
    let leakage = psi.sub(&inside).norm().powi(2);
    Ok(PreparedState { state: psi, fidelity, leakage })
}

/// Prepare `|+>` from `|0> = Psi_V`.
pub fn prepare_plus(mode: PrepareMode) -> Result<PreparedState> {
    let s = (2.0f64 / 3.0).sqrt().asin();
    match mode {
        PrepareMode::TwoStep => prepare_with_rotations(&[
            (BlochAxis::horizontal(), s),
            (BlochAxis::vertical(), (std::f64::consts::PI - s) / 2.0),
        ]),
        PrepareMode::OneStep => {
            prepare_with_rotations(&[(BlochAxis::combined(), std::f64::consts::FRAC_PI_2)])
        }
    }
}

/// Number of alternating rotations about two fixed axes sufficient for any rotation:
/// `k + 2` where `pi/k > min(eta, pi - eta) >= pi/(k+1)`.
pub fn rotation_step_bound(a: &BlochAxis, b: &BlochAxis) -> Result<u32> {
    let eta = a.angle(b);
    let m = eta.min(std::f64::consts::PI - eta);
    if m < 1e-12 {
        return Err(PlaquetteError::CollinearAxes);
    }
    let q = std::f64::consts::PI / m;
    let k = (q - 1e-9).ceil() as u32 - 1;
    Ok(k.max(1) + 2)
}
