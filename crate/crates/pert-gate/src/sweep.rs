use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::lambda_of;
use crate::{gate_fidelity, EchoPulse, GateTarget, PertParams, Result};

/// Lower bound on the small-`J'` fidelity that marks a shadow region.
pub const SHADOW_THRESHOLD: f64 = 0.98;

/// Fidelity reached as `J' -> 0` against the CZ-local target, where only the uncompensated
/// Heisenberg phase `theta = (2n-1) pi / (8 |lambda_z - 1/8|)` remains:
/// `(10 + 6 cos theta) / 16`.
pub fn achievable_fidelity_limit(d_over_j: f64, n: u32) -> f64 {
    let det = (lambda_of(d_over_j) - 0.125).abs();
    let theta = (2 * n - 1) as f64 * std::f64::consts::PI / (8.0 * det);
    (10.0 + 6.0 * theta.cos()) / 16.0
}

pub fn in_shadow_region(d_over_j: f64, n: u32) -> bool {
    achievable_fidelity_limit(d_over_j, n) >= SHADOW_THRESHOLD
}

/// One grid point of a fidelity sweep; `m` is `(phi_T - phi_S)/2 pi`, integer at allowed points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "d_over_J")]
    pub d_over_j: f64,
    #[serde(rename = "Jp_over_J")]
    pub jp_over_j: f64,
    pub n: u32,
    pub m: f64,
    pub t_c: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub leakage: f64,
}

/// Gate fidelity over the product grid, ordered by `J'` then `d`. Points without a gate
/// (poles, `lambda_z = 1/8`) are skipped.
pub fn fidelity_sweep(
    d_grid: &[f64],
    jp_grid: &[f64],
    n: u32,
    target: GateTarget,
    kind: EchoPulse,
) -> Result<Vec<SweepRow>> {
    let points: Vec<(f64, f64)> = jp_grid.iter().flat_map(|&jp| d_grid.iter().map(move |&d| (d, jp))).collect();
    let rows: Vec<Option<SweepRow>> = points
        .par_iter()
        .map(|&(d, jp)| {
            let p = PertParams::from_ratios(d, jp, n).ok()?;
            let rep = gate_fidelity(&p, target, kind).ok()?;
            Some(SweepRow {
                d_over_j: d,
                jp_over_j: jp,
                n,
                m: (rep.phi_t - rep.phi_s) / (2.0 * std::f64::consts::PI),
                t_c: rep.t_c,
                fidelity: rep.fidelity,
                leakage: rep.leakage,
            })
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
