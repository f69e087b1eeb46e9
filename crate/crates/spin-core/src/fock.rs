//! Occupation-number bases for small bosonic or fermionic systems.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{DenseOperator, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// Occupation cap per mode used by default: 2 for bosons, 1 for fermions.
    pub fn default_cap(self) -> u8 {
        match self {
            Statistics::Boson => 2,
            Statistics::Fermion => 1,
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// All occupation patterns of `n_modes` modes holding exactly `particles`
/// particles, each mode capped at `cap`. Fermionic signs follow mode order.
#[derive(Debug, Clone)]
pub struct FockSpace {
    statistics: Statistics,
    n_modes: usize,
    cap: u8,
    particles: usize,
    basis: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl FockSpace {
    pub fn new(statistics: Statistics, n_modes: usize, particles: usize) -> Self {
        Self::with_cap(statistics, n_modes, particles, statistics.default_cap())
    }

    pub fn with_cap(statistics: Statistics, n_modes: usize, particles: usize, cap: u8) -> Self {
        let cap = match statistics {
            Statistics::Fermion => cap.min(1),
            Statistics::Boson => cap,
        };
        let mut basis = Vec::new();
        let mut occ = vec![0u8; n_modes];
        fill(&mut basis, &mut occ, 0, particles, cap);
        Self::from_basis(statistics, n_modes, cap, particles, basis)
    }

    /// Restrict to patterns accepted by `keep`.
    pub fn filtered(&self, keep: impl Fn(&[u8]) -> bool) -> Self {
        let basis = self.basis.iter().filter(|o| keep(o)).cloned().collect();
        Self::from_basis(self.statistics, self.n_modes, self.cap, self.particles, basis)
    }

    fn from_basis(statistics: Statistics, n_modes: usize, cap: u8, particles: usize, basis: Vec<Vec<u8>>) -> Self {
        let index = basis.iter().enumerate().map(|(k, o)| (o.clone(), k)).collect();
        Self { statistics, n_modes, cap, particles, basis, index }
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cap(&self) -> u8 {
        self.cap
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn occupations(&self, k: usize) -> &[u8] {
        &self.basis[k]
    }

    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Apply one ladder operator to a pattern, returning the amplitude factor.
    pub fn apply_ladder(&self, op: Ladder, occ: &mut [u8]) -> Option<f64> {
        let mode = match op {
            Ladder::Create(m) | Ladder::Annihilate(m) => m,
        };
        let sign = match self.statistics {
            Statistics::Boson => 1.0,
            Statistics::Fermion => {
                if occ[..mode].iter().map(|&n| n as u32).sum::<u32>() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        let n = occ[mode];
        match op {
            Ladder::Create(_) => {
                let limit = match self.statistics {
                    Statistics::Fermion => 1,
                    // intermediate states may exceed the cap; the final lookup projects
                    Statistics::Boson => u8::MAX,
                };
                if n >= limit {
                    return None;
                }
                occ[mode] = n + 1;
                Some(sign * ((n + 1) as f64).sqrt())
            }
            Ladder::Annihilate(_) => {
                if n == 0 {
                    return None;
                }
                occ[mode] = n - 1;
                Some(sign * (n as f64).sqrt())
            }
        }
    }

    /// Matrix of the operator product `ops[0] ops[1] ... ops[k]` (rightmost acts first),
    /// projected onto this basis.
    pub fn product(&self, ops: &[Ladder]) -> DenseOperator {
        let dim = self.dim();
        let mut out = DenseOperator::zeros(dim).with_hermitian_hint(false);
        let m = out.matrix_mut();
        for col in 0..dim {
            let mut occ = self.basis[col].clone();
            let mut amp = 1.0;
            let mut alive = true;
            for op in ops.iter().rev() {
                match self.apply_ladder(*op, &mut occ) {
                    Some(f) => amp *= f,
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                if let Some(row) = self.index_of(&occ) {
                    m[(row, col)] += C64::new(amp, 0.0);
                }
            }
        }
        out
    }

    /// `c^dag_to c_from`.
    pub fn hop(&self, to: usize, from: usize) -> DenseOperator {
        self.product(&[Ladder::Create(to), Ladder::Annihilate(from)])
    }

    pub fn number(&self, mode: usize) -> DenseOperator {
        let values: Vec<f64> = self.basis.iter().map(|o| o[mode] as f64).collect();
        DenseOperator::diagonal(&values)
    }

    /// Diagonal operator built from a function of the occupation pattern.
    pub fn diagonal(&self, f: impl Fn(&[u8]) -> f64) -> DenseOperator {
        let values: Vec<f64> = self.basis.iter().map(|o| f(o)).collect();
        DenseOperator::diagonal(&values)
    }
}

fn fill(out: &mut Vec<Vec<u8>>, occ: &mut Vec<u8>, mode: usize, left: usize, cap: u8) {
    if mode == occ.len() {
        if left == 0 {
            out.push(occ.clone());
        }
        return;
    }
    let max = left.min(cap as usize);
    for n in 0..=max {
        occ[mode] = n as u8;
        fill(out, occ, mode + 1, left - n, cap);
    }
    occ[mode] = 0;
}

/// Spin-1/2 operators `(S_x, S_y, S_z)` (spin convention, eigenvalues of `S_z` in units of 1/2)
/// for a set of orbitals, each given as the pair `(up mode, down mode)`.
pub fn orbital_spin(space: &FockSpace, orbitals: &[(usize, usize)]) -> [DenseOperator; 3] {
    let dim = space.dim();
    let mut sp = DenseOperator::zeros(dim);
    let mut sz = DenseOperator::zeros(dim);
    for &(up, dn) in orbitals {
        sp = &sp + &space.hop(up, dn);
        sz = &sz + &(&space.number(up) - &space.number(dn)).scale_re(0.5);
    }
    let sm = sp.adjoint();
    let sx = (&sp + &sm).scale_re(0.5).with_hermitian_hint(true);
    let sy = (&sp - &sm).scale(C64::new(0.0, -0.5)).with_hermitian_hint(true);
    [sx, sy, sz.with_hermitian_hint(true)]
}

/// `S^2` for the given orbitals, assembled as `S^- S^+ + S_z^2 + S_z` from
/// number-conserving operator strings so that it stays exact inside a filtered basis.
pub fn orbital_spin_squared(space: &FockSpace, orbitals: &[(usize, usize)]) -> DenseOperator {
    use Ladder::{Annihilate, Create};
    let dim = space.dim();
    let mut acc = DenseOperator::zeros(dim);
    for &(ui, di) in orbitals {
        for &(uj, dj) in orbitals {
            acc = &acc + &space.product(&[Create(di), Annihilate(ui), Create(uj), Annihilate(dj)]);
        }
    }
    let sz = space.diagonal(|o| orbitals.iter().map(|(u, d)| 0.5 * (o[*u] as f64 - o[*d] as f64)).sum());
    acc = &(&acc + &(&sz * &sz)) + &sz;
    acc.hermitian_part()
}
