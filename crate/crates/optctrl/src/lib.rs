//! Optimal control of a controlled-phase gate on the four middle sites `(2, 3, 1', 4')`
//! of a superplaquette, which occupy bits 0..3 of a 16-dim register.
//!
//! The control Hamiltonian is `H(t) = sum_k O_k sum_l x[k][l] sin(l pi t / T)`.

mod controls;
mod integrator;
mod io;
mod lie;
mod optimize;
mod propagate;
mod pulse;

pub use controls::{control_operators, middle_register, target_gate, ControlSet, CONTROL_COUNT, MIDDLE_SITES};
pub use integrator::{integrator_by_name, integrator_names, Cfm4, Integrator, Midpoint, Stage};
pub use io::{pulse_table, write_pulse_csv, OptimizationRecord, PULSE_SAMPLES};
pub use lie::{lie_closure, LieClosure};
pub use optimize::{optimize, robustness_sweep, OptimizationResult, OptimizeOptions};
pub use propagate::{
    fidelity, fidelity_and_gradient, gradient_check, propagate, propagate_converged, ControlProblem, GradientCheck,
    Propagation,
};
pub use pulse::PulseParams;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error(transparent)]
    Spin(#[from] spin_core::SpinError),
    #[error("invalid pulse: {0}")]
    Pulse(String),
    #[error("unknown integrator `{0}`")]
    UnknownIntegrator(String),
    #[error("integration not converged: step change {change:e} at {steps} steps")]
    NotConverged { steps: usize, change: f64 },
    #[error("Lie closure did not saturate within {0} rounds")]
    ClosureCap(usize),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, ControlError>;
