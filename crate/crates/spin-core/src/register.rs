use serde::{Deserialize, Serialize};

use crate::{DenseOperator, Result, SpinError, C64};

pub const MAX_SITES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Ordered, uniquely labelled spin-1/2 sites. Label `k` owns bit `k` of a basis index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinRegister {
    labels: Vec<String>,
}

impl SpinRegister {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_SITES {
            return Err(SpinError::SiteCount { got: labels.len(), max: MAX_SITES });
        }
        let mut out: Vec<String> = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref().to_string();
            if out.contains(&l) {
                return Err(SpinError::DuplicateLabel(l));
            }
            out.push(l);
        }
        Ok(Self { labels: out })
    }

    /// Sites labelled "1", "2", ... , "n".
    pub fn numbered(n: usize) -> Result<Self> {
        let labels: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        Self::new(&labels)
    }

    pub fn site_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| SpinError::UnknownSite(label.to_string()))
    }
}

pub(crate) fn pauli_on_bit(dim: usize, bit: usize, axis: Axis) -> DenseOperator {
    let mask = 1usize << bit;
    let mut op = DenseOperator::zeros(dim);
    let m = op.matrix_mut();
    for col in 0..dim {
        let up = col & mask == 0;
        match axis {
            Axis::X => m[(col ^ mask, col)] = C64::new(1.0, 0.0),
            // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
            Axis::Y => m[(col ^ mask, col)] = C64::new(0.0, if up { 1.0 } else { -1.0 }),
            Axis::Z => m[(col, col)] = C64::new(if up { 1.0 } else { -1.0 }, 0.0),
        }
    }
    op.with_hermitian_hint(true)
}

pub(crate) fn dot_on_bits(dim: usize, a: usize, b: usize) -> DenseOperator {
    let (ma, mb) = (1usize << a, 1usize << b);
    let mut op = DenseOperator::zeros(dim);
    let m = op.matrix_mut();
    for col in 0..dim {
        let ba = col & ma != 0;
        let bb = col & mb != 0;
        if ba == bb {
            m[(col, col)] += C64::new(1.0, 0.0);
        } else {
            m[(col, col)] -= C64::new(1.0, 0.0);
            m[(col ^ ma ^ mb, col)] += C64::new(2.0, 0.0);
        }
    }
    op.with_hermitian_hint(true)
}
