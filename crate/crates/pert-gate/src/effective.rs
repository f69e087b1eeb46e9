use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};
use spin_core::{eig_hermitian, DenseOperator, C64};

use crate::{effective_coeffs, PertError, PertParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectiveForm {
    /// Second order including the counter-rotating terms.
    Full,
    /// Energy-conserving terms only.
    Rwa,
    /// Ising form valid at `d = J`, written in the `|0>, |1>` encoding.
    IsingDj,
}

impl EffectiveForm {
    pub fn encoding(self) -> Encoding {
        match self {
            EffectiveForm::Full | EffectiveForm::Rwa => Encoding::BoxCross,
            EffectiveForm::IsingDj => Encoding::Logical,
        }
    }
}

impl std::str::FromStr for EffectiveForm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(Self::Full),
            "rwa" => Ok(Self::Rwa),
            "ising_dJ" | "ising-dj" | "ising_dj" => Ok(Self::IsingDj),
            other => Err(format!("unknown effective form `{other}`")),
        }
    }
}

/// Which pair of singlets carries `sigma_z = +1, -1` on each plaquette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    /// `(|cross>, |box>)`: the two eigenstates of the plaquette Hamiltonian.
    BoxCross,
    /// `(|0>, |1>)`.
    Logical,
}

impl Encoding {
    /// The two 16-dim plaquette vectors, `sigma_z = +1` first.
    pub fn plaquette_vectors(self) -> [DVector<C64>; 2] {
        let b = plaquette::logical_basis();
        match self {
            Encoding::BoxCross => [b.ket_cross.amplitudes().clone(), b.ket_box.amplitudes().clone()],
            Encoding::Logical => [b.ket0.amplitudes().clone(), b.ket1.amplitudes().clone()],
        }
    }
}

/// 256x4 isometry: column `a_L + 2 a_R` is `|a_L>` on bits 0..3 times `|a_R>` on bits 4..7.
pub fn encoded_isometry(enc: Encoding) -> DMatrix<C64> {
    let v = enc.plaquette_vectors();
    let mut w = DMatrix::zeros(256, 4);
    for a_r in 0..2 {
        for a_l in 0..2 {
            w.set_column(a_l + 2 * a_r, &v[a_r].kronecker(&v[a_l]));
        }
    }
    w
}

pub(crate) fn pauli2(which: char) -> Matrix2<C64> {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match which {
        'x' => Matrix2::new(o, one, one, o),
        'y' => Matrix2::new(o, -i, i, o),
        'z' => Matrix2::new(one, o, o, -one),
        _ => Matrix2::identity(),
    }
}

/// `ops[k]` placed on qubit `k` (qubit 0 is the low index bit) of an `ops.len()`-qubit register.
pub fn embed_two_qubit(ops: &[Matrix2<C64>]) -> DenseOperator {
    let mut acc = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for op in ops {
        let m = DMatrix::from_iterator(2, 2, op.iter().cloned());
        acc = m.kronecker(&acc);
    }
    DenseOperator::from_matrix(acc).expect("square")
}

fn two(a: char, b: char) -> DenseOperator {
    embed_two_qubit(&[pauli2(a), pauli2(b)])
}

/// Effective Hamiltonian on the two encoded qubits (4x4). Full and rotating-wave forms use
/// the `{box, cross}` encoding, the Ising form the `{|0>, |1>}` encoding.
pub fn effective_hamiltonian(p: &PertParams, form: EffectiveForm) -> Result<DenseOperator> {
    let ratio = p.jp * p.jp / p.j;
    let c = effective_coeffs(p.j, p.d)?;
    let z_sum = &two('z', '1') + &two('1', 'z');
    let zz = two('z', 'z');
    let field = c.delta_e / 2.0 - ratio * c.gamma_z;
    let h = match form {
        EffectiveForm::Rwa => {
            let dot = &(&two('x', 'x') + &two('y', 'y')) + &zz;
            &z_sum.scale_re(field) - &(&dot.scale_re(0.125) + &zz.scale_re(c.lambda_z - 0.125)).scale_re(ratio)
        }
        EffectiveForm::Full => {
            let k = 1.0 / (4.0 * 3f64.sqrt());
            let ising = &two('x', 'x').scale_re(0.25) + &zz.scale_re(c.lambda_z);
            let mixed = &(&two('x', 'z') + &two('z', 'x')).scale_re(-k)
                + &(&two('x', '1') + &two('1', 'x')).scale_re(k);
            &z_sum.scale_re(field) - &(&ising + &mixed).scale_re(ratio)
        }
        EffectiveForm::IsingDj => {
            if (p.d - p.j).abs() > 1e-12 {
                return Err(PertError::FormMismatch("ising_dJ"));
            }
            (&zz - &z_sum.scale_re(0.5)).scale_re(-ratio / 3.0)
        }
    };
    Ok(h.with_hermitian_hint(true))
}

/// Largest state infidelity between full superplaquette dynamics and the rotating-wave
/// effective model, over the four encoded product states and `samples` evenly spaced
/// times in `(0, horizon]`.
pub fn validate_effective(p: &PertParams, horizon: f64, samples: usize) -> Result<f64> {
    let full = eig_hermitian(&crate::superplaquette_hamiltonian(p))?;
    let eff = eig_hermitian(&effective_hamiltonian(p, EffectiveForm::Rwa)?)?;
    let w = encoded_isometry(Encoding::BoxCross);
    // basis coefficients at t = 0
    let full_c0 = full.vectors().adjoint() * &w;
    let eff_c0 = eff.vectors().adjoint();
    let mut worst: f64 = 0.0;
    for s in 1..=samples.max(1) {
        let t = horizon * s as f64 / samples.max(1) as f64;
        let phase = |vals: &[f64], m: &DMatrix<C64>| {
            let mut out = m.clone();
            for (r, e) in vals.iter().enumerate() {
                let ph = C64::from_polar(1.0, -e * t);
                out.row_mut(r).apply(|z| *z *= ph);
            }
            out
        };
        let psi_full = full.vectors() * phase(full.values(), &full_c0);
        let psi_eff = eff.vectors() * phase(eff.values(), &eff_c0);
        let projected = w.adjoint() * psi_full;
        for k in 0..4 {
            let ov = psi_eff.column(k).dotc(&projected.column(k));
            worst = worst.max(1.0 - ov.norm_sqr());
        }
    }
    Ok(worst.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometry_is_orthonormal() {
        for enc in [Encoding::BoxCross, Encoding::Logical] {
            let w = encoded_isometry(enc);
            let g = w.adjoint() * &w;
            assert!((g - DMatrix::<C64>::identity(4, 4)).norm() < 1e-12);
        }
    }

    #[test]
    fn form_parsing() {
        assert_eq!("rwa".parse::<EffectiveForm>().unwrap(), EffectiveForm::Rwa);
        assert!("other".parse::<EffectiveForm>().is_err());
    }
}
