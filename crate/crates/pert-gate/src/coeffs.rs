use serde::{Deserialize, Serialize};

use crate::{PertError, PertParams, Result};

/// Coefficients of the second-order effective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCoeffs {
    pub lambda_z: f64,
    pub gamma_z: f64,
    /// Splitting between the two singlets, `8(J - d)`.
    pub delta_e: f64,
}

const POLES: [f64; 4] = [0.0, 3.0, -1.0, 2.0];

fn check_pole(r: f64) -> Result<()> {
    if POLES.iter().any(|p| (r - p).abs() < 1e-12) {
        return Err(PertError::Pole(r));
    }
    Ok(())
}

pub(crate) fn lambda_of(r: f64) -> f64 {
    (9.0 / r - 8.0 / (r - 3.0) + 2.0 - 24.0 / (r + 1.0) + 1.0 / (2.0 - r)) / 48.0
}

pub(crate) fn gamma_of(r: f64) -> f64 {
    (9.0 / r + 8.0 / (r - 3.0) - 8.0 - 1.0 / (2.0 - r)) / 48.0
}

pub fn effective_coeffs(j: f64, d: f64) -> Result<EffectiveCoeffs> {
    if !(j > 0.0) {
        return Err(PertError::Params(format!("J must be positive, got {j}")));
    }
    let r = d / j;
    check_pole(r)?;
    Ok(EffectiveCoeffs { lambda_z: lambda_of(r), gamma_z: gamma_of(r), delta_e: 8.0 * (j - d) })
}

/// `t_c = (2n-1) pi J / (4 J'^2 |lambda_z - 1/8|)`.
pub fn gate_time(p: &PertParams) -> Result<f64> {
    let c = effective_coeffs(p.j, p.d)?;
    let detuning = (c.lambda_z - 0.125).abs();
    if detuning < 1e-12 || p.jp == 0.0 {
        return Err(PertError::NoGate(p.ratio()));
    }
    Ok((2 * p.n - 1) as f64 * std::f64::consts::PI * p.j / (4.0 * p.jp * p.jp * detuning))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `lambda_z > 1/8`
    Above,
    /// `lambda_z < 1/8`
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllowedRatio {
    pub d_over_j: f64,
    pub branch: Branch,
    pub lambda_z: f64,
}

/// Ratios `d/J` in `(0, 1)` where the Ising phase hits `(2n-1) pi/4` exactly when the
/// triplet-singlet phase difference is `2 pi m`:
/// `lambda_z = 1/8 +- (2n-1)/(16 m)`.
pub fn allowed_ratios(n: u32, m: u32) -> Result<Vec<AllowedRatio>> {
    if n == 0 || m == 0 {
        return Err(PertError::Params("n and m start at 1".into()));
    }
    let offset = (2.0 * n as f64 - 1.0) / (16.0 * m as f64);
    let mut out = Vec::new();
    for (branch, target) in [(Branch::Above, 0.125 + offset), (Branch::Below, 0.125 - offset)] {
        let g = |r: f64| lambda_of(r) - target;
        let steps = 10_000;
        let mut prev = (1e-4, g(1e-4));
        for k in 2..steps {
            let r = k as f64 * 1e-4;
            let val = g(r);
            if prev.1 == 0.0 || prev.1.signum() != val.signum() {
                let root = bisect(&g, prev.0, r, 1e-10);
                out.push(AllowedRatio { d_over_j: root, branch, lambda_z: lambda_of(root) });
            }
            prev = (r, val);
        }
    }
    if out.is_empty() {
        return Err(PertError::NoRoot { n, m });
    }
    out.sort_by(|a, b| a.d_over_j.total_cmp(&b.d_over_j));
    Ok(out)
}

fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut glo = g(lo);
    if glo == 0.0 {
        return lo;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poles_rejected() {
        assert!(matches!(effective_coeffs(1.0, 0.0), Err(PertError::Pole(_))));
        assert!(matches!(effective_coeffs(1.0, 2.0), Err(PertError::Pole(_))));
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(&|x: f64| x * x - 2.0, 1.0, 2.0, 1e-12);
        assert!((r - 2f64.sqrt()).abs() < 1e-11);
    }
}
