use serde::{Deserialize, Serialize};
use spin_core::fock::{orbital_spin_squared, FockSpace, Statistics};
use spin_core::{eig_hermitian, DenseOperator};

use crate::{PlaquetteError, Result};

/// Singlet-triplet splitting of the two-site Hubbard model at unit filling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HubbardGap {
    /// `E(lowest triplet) - E(lowest singlet)` from exact diagonalization.
    pub exact_gap: f64,
    /// `+4t^2/U` for fermions (singlet below), `-4t^2/U` for bosons (triplet below).
    pub perturbative_gap: f64,
}

impl HubbardGap {
    pub fn relative_error(&self) -> f64 {
        if self.perturbative_gap == 0.0 {
            return self.exact_gap.abs();
        }
        ((self.exact_gap - self.perturbative_gap) / self.perturbative_gap).abs()
    }
}

// modes: site 0 up, site 0 down, site 1 up, site 1 down
const ORBITALS: [(usize, usize); 2] = [(0, 1), (2, 3)];

/// Exact two-site, two-particle, two-component Hubbard check of the superexchange scale.
pub fn superexchange_hubbard_check(t: f64, u: f64, statistics: Statistics) -> Result<HubbardGap> {
    if !(u > 0.0) || !t.is_finite() {
        return Err(PlaquetteError::Hubbard(format!("need U > 0 and finite t, got t={t}, U={u}")));
    }
    if t.abs() / u > 0.1 {
        return Err(PlaquetteError::Hubbard(format!("t/U = {} exceeds 0.1", t.abs() / u)));
    }
    // Sz = 0 sector: one up and one down particle
    let space = FockSpace::new(statistics, 4, 2).filtered(|o| o[0] + o[2] == 1 && o[1] + o[3] == 1);
    let mut h = DenseOperator::zeros(space.dim());
    for (a, b) in [(0usize, 2usize), (1, 3)] {
        h = &h - &(&space.hop(a, b) + &space.hop(b, a)).scale_re(t);
    }
    h = &h + &space.diagonal(|o| {
        ORBITALS.iter().map(|(up, dn)| {
            let n = (o[*up] + o[*dn]) as f64;
            0.5 * u * n * (n - 1.0)
        })
        .sum()
    });
    let s2 = orbital_spin_squared(&space, &ORBITALS);
    let singlet = sector_ground(&h, &s2, 0.0)?;
    let triplet = sector_ground(&h, &s2, 2.0)?;
    let j4 = 4.0 * t * t / u;
    let perturbative_gap = match statistics {
        Statistics::Fermion => j4,
        Statistics::Boson => -j4,
    };
    Ok(HubbardGap { exact_gap: triplet - singlet, perturbative_gap })
}

/// Lowest eigenvalue of `h` inside the eigenspace `s2 = target`.
fn sector_ground(h: &DenseOperator, s2: &DenseOperator, target: f64) -> Result<f64> {
    let spec = eig_hermitian(s2)?;
    let cols: Vec<usize> = (0..spec.dim()).filter(|k| (spec.values()[*k] - target).abs() < 1e-6).collect();
    let iso = spin_core::DMatrix::from_fn(spec.dim(), cols.len(), |r, c| spec.vectors()[(r, cols[c])]);
    let block = DenseOperator::from_matrix(iso.adjoint() * h.matrix() * &iso)?.hermitian_part();
    Ok(eig_hermitian(&block)?.values()[0])
}
