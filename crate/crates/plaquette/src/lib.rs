//! A logical qubit stored in the two-dimensional singlet subspace of four
//! spins on a 2x2 plaquette.
//!
//! Sites are labelled `1..4` around the ring (1-2 and 3-4 are the horizontal
//! bonds, 2-3 and 4-1 the vertical ones, 1-3 and 2-4 the diagonals) and
//! occupy bits 0..3.

mod basis;
mod couplings;
mod hubbard;
mod rotation;

pub use basis::{logical_basis, singlet_product, BlochAxis, PlaquetteBasis};
pub use couplings::{heisenberg_plaquette, plaquette_spectrum, LabeledLevel, PlaquetteCouplings};
pub use hubbard::{superexchange_hubbard_check, HubbardGap};
pub use rotation::{
    logical_restriction, pauli_components, prepare_plus, prepare_with_rotations, rotation_pulse, rotation_step_bound,
    Logical2, RotationPulse,
    PrepareMode, PreparedState,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlaquetteError {
    #[error(transparent)]
    Spin(#[from] spin_core::SpinError),
    #[error("singlet pairs overlap or leave sites uncovered: {0}")]
    Pairing(String),
    #[error("rotation axes are collinear")]
    CollinearAxes,
    #[error("invalid Hubbard parameters: {0}")]
    Hubbard(String),
    #[error("operator dimension {0} is not the 16-dim plaquette space")]
    NotPlaquette(usize),
}

pub type Result<T> = std::result::Result<T, PlaquetteError>;

/// Site labels of one plaquette in bit order.
pub const SITES: [&str; 4] = ["1", "2", "3", "4"];

pub fn register() -> spin_core::SpinRegister {
    spin_core::SpinRegister::new(&SITES).expect("static labels")
}
