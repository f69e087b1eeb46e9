use serde::{Deserialize, Serialize};
use spin_core::{eig_hermitian, pauli_dot, total_spin_squared, DMatrix, DenseOperator};

use crate::Result;

/// Signed exchange constants of the six bonds; `H = sum c_ij s_i . s_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct PlaquetteCouplings {
    pub j12: f64,
    pub j23: f64,
    pub j34: f64,
    pub j41: f64,
    pub j13: f64,
    pub j24: f64,
}

impl PlaquetteCouplings {
    /// Rectangular superexchange with ferromagnetic signs: `-J_H (s1.s2 + s3.s4) - J_V (s2.s3 + s4.s1)`.
    pub fn rect(j_h: f64, j_v: f64) -> Self {
        Self { j12: -j_h, j34: -j_h, j23: -j_v, j41: -j_v, j13: 0.0, j24: 0.0 }
    }

    /// Ring plus diagonals: `J (ring bonds) + d (diagonals)`, signs taken as given.
    pub fn diag(j: f64, d: f64) -> Self {
        Self { j12: j, j23: j, j34: j, j41: j, j13: d, j24: d }
    }

    pub fn bonds(&self) -> [((&'static str, &'static str), f64); 6] {
        [
            (("1", "2"), self.j12),
            (("2", "3"), self.j23),
            (("3", "4"), self.j34),
            (("4", "1"), self.j41),
            (("1", "3"), self.j13),
            (("2", "4"), self.j24),
        ]
    }

    /// Sum of all couplings; the constant separating the Pauli-sum spectrum from
    /// the bond-energy convention `c_ij (1 + s_i.s_j)`.
    pub fn bond_sum(&self) -> f64 {
        self.bonds().iter().map(|(_, c)| c).sum()
    }
}

/// `sum c_ij s_i . s_j` on the 16-dim plaquette register.
pub fn heisenberg_plaquette(c: &PlaquetteCouplings) -> DenseOperator {
    let reg = crate::register();
    let mut h = DenseOperator::zeros(16);
    for ((a, b), cij) in c.bonds() {
        if cij != 0.0 {
            h = &h + &pauli_dot(&reg, a, b).expect("static labels").scale_re(cij);
        }
    }
    h.with_hermitian_hint(true)
}

/// One spin multiplet of the plaquette Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledLevel {
    /// Energy in the bond convention (`pauli_eigenvalue + bond_sum`).
    pub energy: f64,
    pub pauli_eigenvalue: f64,
    /// Total spin S (0, 1 or 2).
    pub spin: u32,
    /// `2S + 1`.
    pub degeneracy: usize,
}

/// Multiplets of `heisenberg_plaquette(diag(j, d))`, ordered by spin then energy.
pub fn plaquette_spectrum(j: f64, d: f64) -> Result<Vec<LabeledLevel>> {
    let c = PlaquetteCouplings::diag(j, d);
    let h = heisenberg_plaquette(&c);
    let s2 = eig_hermitian(&total_spin_squared(&crate::register()))?;
    let offset = c.bond_sum();
    let mut out = Vec::new();
    // S^2 eigenvalues 4S(S+1): 0, 8, 24
    for spin in 0u32..=2 {
        let target = 4.0 * (spin * (spin + 1)) as f64;
        let cols: Vec<usize> = (0..16).filter(|k| (s2.values()[*k] - target).abs() < 1e-6).collect();
        let iso = DMatrix::from_fn(16, cols.len(), |r, c| s2.vectors()[(r, cols[c])]);
        let block = iso.adjoint() * h.matrix() * &iso;
        let block = DenseOperator::from_matrix(block)?.hermitian_part();
        let vals = eig_hermitian(&block)?.values().to_vec();
        let deg = (2 * spin + 1) as usize;
        for chunk in vals.chunks(deg) {
            let e = chunk.iter().sum::<f64>() / deg as f64;
            out.push(LabeledLevel { energy: e + offset, pauli_eigenvalue: e, spin, degeneracy: deg });
        }
    }
    Ok(out)
}

