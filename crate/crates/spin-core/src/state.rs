use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::{DenseOperator, Result, SpinError, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Packed", try_from = "Packed")]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        Self { amps: DVector::zeros(dim) }
    }

    pub fn from_vector(amps: DVector<C64>) -> Self {
        Self { amps }
    }

    pub fn from_amplitudes(amps: &[C64]) -> Self {
        Self { amps: DVector::from_column_slice(amps) }
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut DVector<C64> {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn normalized(&self) -> Self {
        Self { amps: &self.amps / C64::new(self.norm(), 0.0) }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// `|<self|other>|^2`.
    pub fn overlap_sqr(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { amps: &self.amps * s }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { amps: &self.amps + &other.amps }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { amps: &self.amps - &other.amps }
    }

    /// Reduced density matrix on the listed bits; `keep[0]` becomes the low bit of the result.
    pub fn reduced_density(&self, keep: &[usize]) -> DenseOperator {
        let n_bits = self.dim().trailing_zeros() as usize;
        let rest: Vec<usize> = (0..n_bits).filter(|b| !keep.contains(b)).collect();
        let dk = 1usize << keep.len();
        let dr = 1usize << rest.len();
        let compose = |k: usize, r: usize| -> usize {
            let mut idx = 0;
            for (pos, b) in keep.iter().enumerate() {
                if k >> pos & 1 == 1 {
                    idx |= 1 << b;
                }
            }
            for (pos, b) in rest.iter().enumerate() {
                if r >> pos & 1 == 1 {
                    idx |= 1 << b;
                }
            }
            idx
        };
        let mut rho = DenseOperator::zeros(dk);
        let m = rho.matrix_mut();
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..dr {
                    acc += self.amps[compose(a, r)] * self.amps[compose(b, r)].conj();
                }
                m[(a, b)] = acc;
            }
        }
        rho
    }
}

#[derive(Serialize, Deserialize)]
struct Packed {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<StateVector> for Packed {
    fn from(v: StateVector) -> Self {
        Packed {
            dim: v.dim(),
            re: v.amps.iter().map(|z| z.re).collect(),
            im: v.amps.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<Packed> for StateVector {
    type Error = SpinError;
    fn try_from(p: Packed) -> Result<Self> {
        if p.re.len() != p.dim || p.im.len() != p.dim {
            return Err(SpinError::Malformed(format!("expected {} amplitudes", p.dim)));
        }
        let amps: Vec<C64> = p.re.iter().zip(&p.im).map(|(r, i)| C64::new(*r, *i)).collect();
        Ok(Self::from_amplitudes(&amps))
    }
}
