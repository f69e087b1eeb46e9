use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{ControlError, Result, CONTROL_COUNT};

/// Sine-series pulse coefficients `x[k][l]` (row `k` = control, column `l-1` = harmonic `l`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub x: DMatrix<f64>,
    pub horizon: f64,
}

impl PulseParams {
    pub fn new(x: DMatrix<f64>, horizon: f64) -> Result<Self> {
        if x.nrows() != CONTROL_COUNT || x.ncols() == 0 {
            return Err(ControlError::Pulse(format!(
                "expected {CONTROL_COUNT} rows and at least one harmonic, got {}x{}",
                x.nrows(),
                x.ncols()
            )));
        }
        if !(horizon > 0.0) || x.iter().any(|v| !v.is_finite()) {
            return Err(ControlError::Pulse("horizon must be positive and coefficients finite".into()));
        }
        Ok(Self { x, horizon })
    }

    pub fn zeros(harmonics: usize, horizon: f64) -> Self {
        Self { x: DMatrix::zeros(CONTROL_COUNT, harmonics.max(1)), horizon }
    }

    /// Row-major flattening `k * L + (l - 1)`.
    pub fn from_flat(values: &[f64], harmonics: usize, horizon: f64) -> Result<Self> {
        if values.len() != CONTROL_COUNT * harmonics {
            return Err(ControlError::Pulse(format!("expected {} values", CONTROL_COUNT * harmonics)));
        }
        Self::new(DMatrix::from_row_slice(CONTROL_COUNT, harmonics, values), horizon)
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.x.transpose().iter().cloned().collect()
    }

    pub fn harmonics(&self) -> usize {
        self.x.ncols()
    }

    /// `sin(l pi t / T)` for `l = 1..=L`.
    pub fn basis_values(&self, t: f64) -> Vec<f64> {
        (1..=self.harmonics()).map(|l| sin_pi(l as f64 * t / self.horizon)).collect()
    }

    /// Control amplitudes at time `t`.
    pub fn amplitudes(&self, t: f64) -> [f64; CONTROL_COUNT] {
        let b = self.basis_values(t);
        std::array::from_fn(|k| self.x.row(k).iter().zip(&b).map(|(c, s)| c * s).sum())
    }

    /// Pulse played backwards with flipped sign, `a'(t) = -a(T - t)`.
    pub fn time_reversed(&self) -> Self {
        let mut x = self.x.clone();
        for (col, mut c) in x.column_iter_mut().enumerate() {
            // sin(l pi (T - t)/T) = -(-1)^l sin(l pi t/T)
            if (col + 1) % 2 == 1 {
                c.neg_mut();
            }
        }
        Self { x, horizon: self.horizon }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { x: &self.x * s, horizon: self.horizon }
    }

    /// Largest `|a_k(t)|` over a grid of `samples + 1` points.
    pub fn max_amplitude(&self, samples: usize) -> f64 {
        (0..=samples)
            .flat_map(|i| self.amplitudes(self.horizon * i as f64 / samples as f64))
            .fold(0.0, |m, a| m.max(a.abs()))
    }
}

/// `sin(pi u)`, exactly zero at integer `u`.
fn sin_pi(u: f64) -> f64 {
    let r = u.rem_euclid(2.0);
    if r >= 1.0 {
        -(std::f64::consts::PI * (r - 1.0)).sin()
    } else {
        (std::f64::consts::PI * r).sin()
    }
}
