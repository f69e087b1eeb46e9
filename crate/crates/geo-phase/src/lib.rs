//! Geometric-phase gate analysis for two-band double wells.
//!
//! A left site with one (ground) band is tunnel-coupled to the excited band of a
//! right site with two bands. This crate tabulates the energy cost of moving one
//! particle across, builds the on-site Hamiltonians in second quantization for
//! bosons and fermions, and integrates the resonant tunneling that imprints the
//! conditional phase.

mod dynamics;
mod ledger;
mod onsite;
mod params;

pub use dynamics::{
    link_dynamics, sector_links, tunneling_phase, ChannelDynamics, Link, LinkConfig, ReturnDynamics, Sector,
    SectorDynamics, LEAKAGE_CONSTANT,
};
pub use ledger::{
    boson_f, delta_e1, fermion_eta, ledger_entry, matrix_free_delta_e1, resonance_table, table_bias, table_configs,
    table_csv, write_table_csv, EnergyLedgerEntry, NumberConfig, TableRow,
};
pub use onsite::{
    onsite_hamiltonian, schwinger_identity_check, sector_energies, spin_squared, tunneling_operator, Band,
    TwoBandFockSpace,
};
pub use params::OnsiteParams;
pub use spin_core::fock::Statistics;

use num_rational::Rational64;
use spin_core::SpinError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeoError {
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error("spin {j} not reachable with band occupations ({n_a}, {n_b})")]
    SpinOutOfRange { n_a: u8, n_b: u8, j: Rational64 },
    #[error("invalid occupation: {0}")]
    Occupation(String),
    #[error("operation needs a bosonic space")]
    NotBosonic,
    #[error("spin sector S = {0} is not one-dimensional in the initial configuration")]
    AmbiguousChannel(Rational64),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GeoError>;
