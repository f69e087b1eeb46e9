use std::sync::Arc;

/// One exponential of a step: `exp(-i dt sum_q w_q H(t + c_q dt))` from `(c_q, w_q)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub nodes: Vec<(f64, f64)>,
}

/// A product-of-exponentials scheme for `i dU/dt = H(t) U`.
pub trait Integrator: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;
    /// Global order in the step size.
    fn order(&self) -> u32;
    /// Stages in application order (first stage acts first).
    fn stages(&self) -> Vec<Stage>;
}

/// Exponential of the midpoint Hamiltonian.
#[derive(Debug, Clone, Copy, Default)]
pub struct Midpoint;

impl Integrator for Midpoint {
    fn name(&self) -> &'static str {
        "midpoint"
    }
    fn order(&self) -> u32 {
        2
    }
    fn stages(&self) -> Vec<Stage> {
        vec![Stage { nodes: vec![(0.5, 1.0)] }]
    }
}

/// Commutator-free fourth-order Magnus scheme on two Gauss nodes.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cfm4;

impl Integrator for Cfm4 {
    fn name(&self) -> &'static str {
        "cfm4"
    }
    fn order(&self) -> u32 {
        4
    }
    fn stages(&self) -> Vec<Stage> {
        let r = 3f64.sqrt() / 6.0;
        let (c1, c2) = (0.5 - r, 0.5 + r);
        let (a1, a2) = (0.25 + r, 0.25 - r);
        vec![Stage { nodes: vec![(c1, a1), (c2, a2)] }, Stage { nodes: vec![(c1, a2), (c2, a1)] }]
    }
}

pub fn integrator_names() -> &'static [&'static str] {
    &["cfm4", "midpoint"]
}

pub fn integrator_by_name(name: &str) -> Option<Arc<dyn Integrator>> {
    match name {
        "cfm4" => Some(Arc::new(Cfm4)),
        "midpoint" => Some(Arc::new(Midpoint)),
        _ => None,
    }
}
