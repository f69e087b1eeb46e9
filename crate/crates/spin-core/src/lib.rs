//! Dense linear algebra for registers of spin-1/2 sites.
//!
//! Conventions used throughout the workspace:
//! * spin operators are Pauli matrices (no factor 1/2), so `s_i . s_j` has
//!   eigenvalues -3 (singlet) and +1 (triplet);
//! * the first site label is the least significant bit of a basis index;
//! * bit value 0 is spin up (`sigma_z = +1`);
//! * hbar = 1.

mod error;
pub mod fock;
mod operator;
mod register;
mod spectrum;
mod state;

pub use error::SpinError;
pub use operator::DenseOperator;
pub use register::{Axis, SpinRegister};
pub use spectrum::{eig_hermitian, unitary_evolve, Spectrum};
pub use state::StateVector;

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

pub type Result<T> = std::result::Result<T, SpinError>;

/// Tolerance on `|A - A^dag|` accepted by the Hermitian routines, relative to `max(1, |A|)`.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Pauli matrix `axis` on `site`, identity elsewhere.
pub fn pauli_site(reg: &SpinRegister, site: &str, axis: Axis) -> Result<DenseOperator> {
    let bit = reg.index_of(site)?;
    Ok(register::pauli_on_bit(reg.dim(), bit, axis))
}

/// `s_i . s_j = sum_a sigma_i^a sigma_j^a`, assembled as `2 SWAP_ij - 1`.
pub fn pauli_dot(reg: &SpinRegister, i: &str, j: &str) -> Result<DenseOperator> {
    let bi = reg.index_of(i)?;
    let bj = reg.index_of(j)?;
    if bi == bj {
        return Err(SpinError::SameSite(i.to_string()));
    }
    Ok(register::dot_on_bits(reg.dim(), bi, bj))
}

/// `(sum_i sigma_i)^2`, eigenvalues `4 S (S + 1)`.
pub fn total_spin_squared(reg: &SpinRegister) -> DenseOperator {
    let n = reg.site_count();
    let dim = reg.dim();
    // (sum sigma)^2 = 3n + 2 sum_{i<j} s_i.s_j
    let mut acc = DenseOperator::identity(dim).scale_re(3.0 * n as f64);
    for i in 0..n {
        for j in (i + 1)..n {
            acc = &acc + &register::dot_on_bits(dim, i, j).scale_re(2.0);
        }
    }
    acc.with_hermitian_hint(true)
}

/// Component `axis` of the total spin `sum_i sigma_i^axis`.
pub fn total_spin_component(reg: &SpinRegister, axis: Axis) -> DenseOperator {
    let dim = reg.dim();
    let mut acc = DenseOperator::zeros(dim);
    for b in 0..reg.site_count() {
        acc = &acc + &register::pauli_on_bit(dim, b, axis);
    }
    acc.with_hermitian_hint(true)
}
