use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{ControlError, OptimizationResult, PulseParams, Result};

pub const PULSE_SAMPLES: usize = 1000;

/// Rows `(t, a_1..a_5)` at `samples` evenly spaced times including both ends.
pub fn pulse_table(pulse: &PulseParams, samples: usize) -> Vec<[f64; 6]> {
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let t = pulse.horizon * i as f64 / (n - 1) as f64;
            let a = pulse.amplitudes(t);
            [t, a[0], a[1], a[2], a[3], a[4]]
        })
        .collect()
}

pub fn write_pulse_csv<W: Write>(pulse: &PulseParams, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| ControlError::Io(e.to_string());
    w.write_record(["t", "alpha1", "alpha2", "alpha3", "alpha4", "alpha5"]).map_err(io)?;
    for row in pulse_table(pulse, PULSE_SAMPLES) {
        w.write_record(row.iter().map(|v| format!("{v:.17e}"))).map_err(io)?;
    }
    w.flush().map_err(|e| ControlError::Io(e.to_string()))
}

/// Exported optimization summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationRecord {
    /// Row-major `x[k][l]`, `K = 5` rows of `L` harmonics.
    pub x: Vec<Vec<f64>>,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(rename = "L")]
    pub harmonics: usize,
    pub infidelity: f64,
    pub seed: u64,
    pub steps: usize,
    pub integrator: String,
    pub iterations: usize,
    pub restarts_used: usize,
    pub max_amplitude: f64,
}

impl From<&OptimizationResult> for OptimizationRecord {
    fn from(r: &OptimizationResult) -> Self {
        Self {
            x: r.x_final.x.row_iter().map(|row| row.iter().cloned().collect()).collect(),
            horizon: r.x_final.horizon,
            harmonics: r.x_final.harmonics(),
            infidelity: r.infidelity,
            seed: r.seed,
            steps: r.steps,
            integrator: r.integrator.clone(),
            iterations: r.iterations,
            restarts_used: r.restarts_used,
            max_amplitude: r.max_amplitude,
        }
    }
}

impl OptimizationRecord {
    pub fn pulse(&self) -> Result<PulseParams> {
        let flat: Vec<f64> = self.x.iter().flatten().cloned().collect();
        PulseParams::from_flat(&flat, self.harmonics, self.horizon)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| ControlError::Io(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| ControlError::Io(e.to_string()))
    }
}
