//! Dataset builders shared by the subcommands and the figure reports.
//! Column names are part of the output contract; see the README for the schemas.

use std::f64::consts::{FRAC_PI_4, PI};

use optctrl::{ControlProblem, PulseParams, CONTROL_COUNT};
use pert_gate::{
    achievable_fidelity_limit, allowed_ratios, effective_coeffs, gate_fidelity, gate_time, in_shadow_region, Branch,
    EchoPulse, GateTarget, PertParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spin_core::DMatrix;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    #[serde(rename = "d_over_J")]
    pub d_over_j: f64,
    pub lambda_z: f64,
    pub gamma_z: f64,
    pub delta_e: f64,
    /// Small-coupling fidelity limit for `n = 1`.
    #[serde(rename = "F_limit")]
    pub fidelity_limit: f64,
    pub shadow: bool,
}

pub fn coeff_rows(d_grid: &[f64]) -> Vec<CoeffRow> {
    d_grid
        .iter()
        .filter_map(|&d| {
            let c = effective_coeffs(1.0, d).ok()?;
            Some(CoeffRow {
                d_over_j: d,
                lambda_z: c.lambda_z,
                gamma_z: c.gamma_z,
                delta_e: c.delta_e,
                fidelity_limit: achievable_fidelity_limit(d, 1),
                shadow: in_shadow_region(d, 1),
            })
        })
        .collect()
}

/// One grid point of a gate-fidelity sweep. Failed points keep their place with NaN
/// values and the reason in `status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    #[serde(rename = "d_over_J")]
    pub d_over_j: f64,
    #[serde(rename = "Jp_over_J")]
    pub jp_over_j: f64,
    pub n: u32,
    pub t_c: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub leakage: f64,
    #[serde(rename = "F_limit")]
    pub fidelity_limit: f64,
    pub shadow: bool,
    pub status: String,
}

impl FidelityRow {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Fidelity over the product grid, ordered by `J'` then `d` whatever the worker count.
pub fn fidelity_rows(d_grid: &[f64], jp_grid: &[f64], n: u32, target: GateTarget, echo: EchoPulse) -> Vec<FidelityRow> {
    let points: Vec<(f64, f64)> = jp_grid.iter().flat_map(|&jp| d_grid.iter().map(move |&d| (d, jp))).collect();
    points
        .par_iter()
        .map(|&(d, jp)| {
            let report = PertParams::from_ratios(d, jp, n).and_then(|p| gate_fidelity(&p, target, echo));
            let (t_c, fidelity, leakage, status) = match report {
                Ok(r) => (r.t_c, r.fidelity, r.leakage, "ok".to_string()),
                Err(e) => (f64::NAN, f64::NAN, f64::NAN, e.to_string()),
            };
            FidelityRow {
                d_over_j: d,
                jp_over_j: jp,
                n,
                t_c,
                fidelity,
                leakage,
                fidelity_limit: achievable_fidelity_limit(d, n),
                shadow: in_shadow_region(d, n),
                status,
            }
        })
        .collect()
}

/// Interior local minima of `F` along `d` for one coupling.
pub fn local_minima(rows: &[FidelityRow], jp: f64) -> Vec<f64> {
    let line: Vec<&FidelityRow> = rows.iter().filter(|r| r.jp_over_j == jp && r.ok()).collect();
    line.windows(3)
        .filter(|w| w[1].fidelity < w[0].fidelity && w[1].fidelity <= w[2].fidelity)
        .map(|w| w[1].d_over_j)
        .collect()
}

/// An allowed ratio with both gate conditions checked by back-substitution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllowedRow {
    pub n: u32,
    pub m: u32,
    pub branch: Branch,
    #[serde(rename = "d_over_J")]
    pub d_over_j: f64,
    pub lambda_z: f64,
    /// `|J'^2 t |lambda_z - 1/8| - (2n-1) pi/4|`.
    pub ising_residual: f64,
    /// `|J'^2 t / 2 - 2 pi m|`, relative to `2 pi m`.
    pub phase_residual: f64,
    #[serde(rename = "Jp_over_J")]
    pub jp_over_j: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub leakage: f64,
}

pub fn allowed_rows(pairs: &[(u32, u32)], jp: f64, target: GateTarget, echo: EchoPulse) -> Result<Vec<AllowedRow>, CliError> {
    let mut jobs = Vec::new();
    for &(n, m) in pairs {
        for r in allowed_ratios(n, m)? {
            jobs.push((n, m, r));
        }
    }
    jobs.par_iter()
        .map(|&(n, m, r)| {
            let p = PertParams::new(1.0, r.d_over_j, jp, n, m)?;
            let t = gate_time(&p)?;
            let ising = jp * jp * t * (r.lambda_z - 0.125).abs();
            let diff = jp * jp * t / 2.0;
            let rep = gate_fidelity(&p, target, echo)?;
            Ok(AllowedRow {
                n,
                m,
                branch: r.branch,
                d_over_j: r.d_over_j,
                lambda_z: r.lambda_z,
                ising_residual: (ising - (2 * n - 1) as f64 * FRAC_PI_4).abs(),
                phase_residual: (diff - 2.0 * PI * m as f64).abs() / (2.0 * PI * m as f64),
                jp_over_j: jp,
                fidelity: rep.fidelity,
                leakage: rep.leakage,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessRow {
    #[serde(rename = "dJ_over_J")]
    pub deviation: f64,
    pub infidelity: f64,
}

pub const DEFAULT_DEVIATIONS: [f64; 13] = [0.0, 1e-6, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 2e-2, 4e-2, 7e-2, 1e-1];

pub fn robustness_rows(problem: &ControlProblem, pulse: &PulseParams, deviations: &[f64]) -> Vec<RobustnessRow> {
    optctrl::robustness_sweep(problem, pulse, deviations)
        .into_iter()
        .zip(deviations)
        .map(|(infidelity, &deviation)| RobustnessRow { deviation, infidelity })
        .collect()
}

/// Least-squares slope of `log y` against `log x` over points with `lo <= x <= hi`.
pub fn loglog_slope(rows: &[RobustnessRow], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.deviation >= lo && r.deviation <= hi && r.infidelity > 0.0)
        .map(|r| (r.deviation.ln(), r.infidelity.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradCheckRow {
    pub point: usize,
    pub max_relative_error: f64,
    pub max_abs_error: f64,
    pub worst_control: usize,
    pub worst_harmonic: usize,
}

/// Analytic gradient against central differences at `points` random pulses drawn from
/// `seed`, coefficients uniform in `(-scale, scale)`.
pub fn gradient_rows(
    problem: &ControlProblem,
    points: usize,
    harmonics: usize,
    scale: f64,
    h: f64,
    floor: f64,
    seed: u64,
) -> Result<Vec<GradCheckRow>, CliError> {
    let pulses = (0..points)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x = DMatrix::from_fn(CONTROL_COUNT, harmonics, |_, _| rng.random_range(-scale..scale));
            PulseParams::new(x, 1.0)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pulses
        .par_iter()
        .enumerate()
        .map(|(point, pulse)| {
            let c = optctrl::gradient_check(problem, pulse, h, floor);
            GradCheckRow {
                point,
                max_relative_error: c.max_relative_error,
                max_abs_error: c.max_abs_error,
                worst_control: c.worst_component.0 + 1,
                worst_harmonic: c.worst_component.1,
            }
        })
        .collect())
}

pub fn parse_target(s: &str) -> Result<GateTarget, CliError> {
    s.parse().map_err(CliError::Usage)
}

pub fn parse_echo(s: &str) -> Result<EchoPulse, CliError> {
    match s {
        "ideal" => Ok(EchoPulse::Ideal),
        "composite" => Ok(EchoPulse::Composite),
        other => Err(CliError::Usage(format!("unknown echo pulse `{other}`"))),
    }
}

/// Ratios `d/J` in `(lo, hi)` where `lambda_z = 1/8`, found by bisection between sign changes
/// on a `samples`-point grid.
pub fn lambda_crossings(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let g = |r: f64| effective_coeffs(1.0, r).map(|c| c.lambda_z - 0.125).ok();
    let grid = crate::linspace(lo, hi, samples);
    let mut out = Vec::new();
    for w in grid.windows(2) {
        let (Some(ga), Some(gb)) = (g(w[0]), g(w[1])) else { continue };
        // a pole flips the sign with a huge jump; skip those brackets
        if ga.signum() == gb.signum() || ga.abs().max(gb.abs()) > 1.0 {
            continue;
        }
        let (mut a, mut b, mut fa) = (w[0], w[1], ga);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let Some(fm) = g(mid) else { break };
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
            if b - a < 1e-14 {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}
