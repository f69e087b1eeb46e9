use serde::{Deserialize, Serialize};
use spin_core::{total_spin_squared, DenseOperator, SpinRegister, StateVector, C64};

use crate::{PlaquetteError, Result};

/// Product of two-spin singlets `(|up_i down_j> - |down_i up_j>)/sqrt(2)` over
/// disjoint pairs covering every site of the register.
pub fn singlet_product(reg: &SpinRegister, pairs: &[(&str, &str)]) -> Result<StateVector> {
    let mut bits = Vec::with_capacity(2 * pairs.len());
    for (i, j) in pairs {
        let (bi, bj) = (reg.index_of(i)?, reg.index_of(j)?);
        if bi == bj || bits.contains(&bi) || bits.contains(&bj) {
            return Err(PlaquetteError::Pairing(format!("pair ({i},{j})")));
        }
        bits.push(bi);
        bits.push(bj);
    }
    if bits.len() != reg.site_count() {
        return Err(PlaquetteError::Pairing(format!(
            "{} of {} sites covered",
            bits.len(),
            reg.site_count()
        )));
    }
    let mut v = StateVector::zeros(reg.dim());
    let amp = (0.5f64).powf(pairs.len() as f64 / 2.0);
    for choice in 0..(1usize << pairs.len()) {
        let mut idx = 0usize;
        let mut sign = 1.0;
        for p in 0..pairs.len() {
            let (bi, bj) = (bits[2 * p], bits[2 * p + 1]);
            if choice >> p & 1 == 0 {
                idx |= 1 << bj;
            } else {
                idx |= 1 << bi;
                sign = -sign;
            }
        }
        v.amplitudes_mut()[idx] = C64::new(sign * amp, 0.0);
    }
    Ok(v)
}

/// Unit vector on the logical Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochAxis([f64; 3]);

impl BlochAxis {
    pub fn new(v: [f64; 3]) -> Option<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Axis generated by the horizontal bonds.
    pub fn horizontal() -> Self {
        Self([3f64.sqrt() / 2.0, 0.0, -0.5])
    }

    /// Axis generated by the vertical bonds.
    pub fn vertical() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    /// Axis taking the north pole to the equator point `|+>` in a quarter turn.
    pub fn combined() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self([s, 0.0, s])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn angle(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

/// The six named singlet-sector vectors and the projector onto their span.
#[derive(Debug, Clone)]
pub struct PlaquetteBasis {
    pub psi_h: StateVector,
    pub psi_v: StateVector,
    pub ket0: StateVector,
    pub ket1: StateVector,
    pub ket_box: StateVector,
    pub ket_cross: StateVector,
    pub logical_projector: DenseOperator,
}

impl PlaquetteBasis {
    /// `(|0> + |1>)/sqrt(2)`.
    pub fn ket_plus(&self) -> StateVector {
        self.ket0.add(&self.ket1).scale(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    /// Columns `|0>, |1>` as a 16x2 isometry.
    pub fn isometry(&self) -> nalgebra::DMatrix<C64> {
        nalgebra::DMatrix::from_columns(&[self.ket0.amplitudes().clone(), self.ket1.amplitudes().clone()])
    }

    /// Sanity check of the defining relations; returns the largest violation.
    pub fn invariant_violation(&self, reg: &SpinRegister) -> f64 {
        let s2 = total_spin_squared(reg);
        let mut worst: f64 = 0.0;
        let one = C64::new(1.0, 0.0);
        worst = worst.max((self.psi_h.inner(&self.psi_v) - C64::new(0.5, 0.0)).norm());
        worst = worst.max(self.ket0.inner(&self.ket1).norm());
        for v in [&self.psi_h, &self.psi_v, &self.ket0, &self.ket1, &self.ket_box, &self.ket_cross] {
            worst = worst.max((v.inner(v) - one).norm());
            worst = worst.max(s2.apply(v).norm());
        }
        let inv_sqrt3 = C64::new(1.0 / 3f64.sqrt(), 0.0);
        let boxed = self.psi_h.add(&self.psi_v).scale(inv_sqrt3);
        worst = worst.max(boxed.sub(&self.ket_box).norm());
        let cross = self.psi_h.sub(&self.psi_v);
        worst = worst.max(cross.sub(&self.ket_cross).norm());
        worst
    }
}

/// Builds the logical basis. `|0> = Psi_V`; `|1> = (2/sqrt 3)(Psi_H - Psi_V/2)`, the sign
/// chosen so that `Psi_H` sits on the horizontal axis `(sqrt3/2, 0, -1/2)`.
pub fn logical_basis() -> PlaquetteBasis {
    let reg = crate::register();
    let psi_h = singlet_product(&reg, &[("1", "2"), ("3", "4")]).expect("valid pairing");
    let psi_v = singlet_product(&reg, &[("2", "3"), ("4", "1")]).expect("valid pairing");
    let ket0 = psi_v.clone();
    let ket1 = psi_h.sub(&psi_v.scale(C64::new(0.5, 0.0))).scale(C64::new(2.0 / 3f64.sqrt(), 0.0));
    let ket_box = psi_h.add(&psi_v).scale(C64::new(1.0 / 3f64.sqrt(), 0.0));
    let ket_cross = psi_h.sub(&psi_v);
    let logical_projector =
        (&DenseOperator::outer(&ket0, &ket0) + &DenseOperator::outer(&ket1, &ket1)).hermitian_part();
    PlaquetteBasis { psi_h, psi_v, ket0, ket1, ket_box, ket_cross, logical_projector }
}
