use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use spin_core::{DenseOperator, C64};

use crate::{control_operators, integrator_by_name, target_gate, ControlError, Integrator, PulseParams, Result};

/// Controls, target and time discretization.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    ops: Vec<DMatrix<C64>>,
    target: DMatrix<C64>,
    integrator: Arc<dyn Integrator>,
    pub steps: usize,
}

/// Result of propagating a pulse to the horizon.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub unitary: DenseOperator,
    pub steps: usize,
    pub fidelity: f64,
    /// `|F(steps) - F(steps/2)|` when produced by step doubling.
    pub step_change: Option<f64>,
}

/// One exponential `exp(-i dt sum_k a_k O_k)` with `a_k = sum_l x[k][l] basis[l]`.
struct Slice {
    basis: Vec<f64>,
}

impl ControlProblem {
    pub fn new(steps: usize, integrator: &str) -> Result<Self> {
        let integrator = integrator_by_name(integrator).ok_or_else(|| ControlError::UnknownIntegrator(integrator.into()))?;
        if steps == 0 {
            return Err(ControlError::Pulse("steps must be at least 1".into()));
        }
        let ops = control_operators().ops.iter().map(|o| o.matrix().clone()).collect();
        Ok(Self { ops, target: target_gate().into_matrix(), integrator, steps })
    }

    pub fn with_steps(&self, steps: usize) -> Self {
        Self { steps: steps.max(1), ..self.clone() }
    }

    pub fn integrator(&self) -> &dyn Integrator {
        self.integrator.as_ref()
    }

    fn slices(&self, pulse: &PulseParams) -> Vec<Slice> {
        let dt = pulse.horizon / self.steps as f64;
        let stages = self.integrator.stages();
        let mut out = Vec::with_capacity(self.steps * stages.len());
        for j in 0..self.steps {
            let t0 = j as f64 * dt;
            for stage in &stages {
                let mut basis = vec![0.0; pulse.harmonics()];
                for &(c, w) in &stage.nodes {
                    for (b, s) in basis.iter_mut().zip(pulse.basis_values(t0 + c * dt)) {
                        *b += w * s;
                    }
                }
                out.push(Slice { basis });
            }
        }
        out
    }

    fn generator(&self, pulse: &PulseParams, slice: &Slice) -> DMatrix<C64> {
        let mut g = DMatrix::zeros(16, 16);
        for (k, op) in self.ops.iter().enumerate() {
            let a: f64 = pulse.x.row(k).iter().zip(&slice.basis).map(|(x, b)| x * b).sum();
            if a != 0.0 {
                g += op * C64::new(a, 0.0);
            }
        }
        g
    }

    fn overlap(&self, u: &DMatrix<C64>) -> C64 {
        // Tr(Ug^dag U) / 16; the target is real symmetric
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..16 {
            for j in 0..16 {
                acc += self.target[(j, i)].conj() * u[(j, i)];
            }
        }
        acc / 16.0
    }

    /// `U(T)` as a 16x16 matrix.
    pub fn propagate_matrix(&self, pulse: &PulseParams) -> DMatrix<C64> {
        let dt = pulse.horizon / self.steps as f64;
        let mut u = DMatrix::<C64>::identity(16, 16);
        for slice in self.slices(pulse) {
            let eig = SymmetricEigen::new(self.generator(pulse, &slice));
            let v = &eig.eigenvectors;
            let mut vd = v.clone();
            for (c, w) in eig.eigenvalues.iter().enumerate() {
                let ph = C64::from_polar(1.0, -w * dt);
                vd.column_mut(c).apply(|z| *z *= ph);
            }
            u = vd * (v.adjoint() * u);
        }
        u
    }

    pub fn propagate(&self, pulse: &PulseParams) -> Propagation {
        let u = self.propagate_matrix(pulse);
        let fidelity = self.overlap(&u).norm_sqr();
        Propagation { unitary: DenseOperator::from_matrix(u).expect("square"), steps: self.steps, fidelity, step_change: None }
    }

    pub fn fidelity(&self, pulse: &PulseParams) -> f64 {
        self.overlap(&self.propagate_matrix(pulse)).norm_sqr()
    }

    /// `F = |Tr(Ug^dag U)/16|^2` and its exact gradient with respect to `x` for the
    /// discretized propagator: the adjoint is co-propagated forward from `U^dag Ug`, and
    /// each exponential is differentiated through its eigen-decomposition.
    pub fn fidelity_and_gradient(&self, pulse: &PulseParams) -> (f64, DMatrix<f64>) {
        let dt = pulse.horizon / self.steps as f64;
        let slices = self.slices(pulse);
        let mut factors = Vec::with_capacity(slices.len());
        let mut u = DMatrix::<C64>::identity(16, 16);
        for slice in &slices {
            let eig = SymmetricEigen::new(self.generator(pulse, slice));
            let phases: Vec<C64> = eig.eigenvalues.iter().map(|w| C64::from_polar(1.0, -w * dt)).collect();
            let mut vd = eig.eigenvectors.clone();
            for (c, ph) in phases.iter().enumerate() {
                vd.column_mut(c).apply(|z| *z *= *ph);
            }
            let step = &vd * eig.eigenvectors.adjoint();
            u = &step * u;
            factors.push((eig, step));
        }
        let f = self.overlap(&u);
        let mut grad = DMatrix::zeros(pulse.x.nrows(), pulse.harmonics());
        let mut psi = DMatrix::<C64>::identity(16, 16);
        let mut xi = u.adjoint() * &self.target;
        let minus_i_dt = C64::new(0.0, -dt);
        for (slice, (eig, step)) in slices.iter().zip(&factors) {
            let v = &eig.eigenvectors;
            let w = &eig.eigenvalues;
            let xi_next = step * &xi;
            let m = v.adjoint() * (&psi * xi_next.adjoint()) * v;
            // z_ij = G_ij m_ji with G the divided differences of exp(-i dt w)
            let mut z = DMatrix::<C64>::zeros(16, 16);
            for i in 0..16 {
                for j in 0..16 {
                    // (e^{-i dt w_i} - e^{-i dt w_j}) / (w_i - w_j) without cancellation
                    let half = 0.5 * dt * (w[i] - w[j]);
                    let sinc = if half.abs() > 1e-8 { half.sin() / half } else { 1.0 - half * half / 6.0 };
                    let g = minus_i_dt * C64::from_polar(sinc, -0.5 * dt * (w[i] + w[j]));
                    z[(i, j)] = g * m[(j, i)];
                }
            }
            // df_k = sum_ij (V^dag O_k V)_ij z_ij = Tr(O_k Y), Y = V z^T V^dag
            let y = v * z.transpose() * v.adjoint();
            for (k, op) in self.ops.iter().enumerate() {
                let mut dfk = C64::new(0.0, 0.0);
                for i in 0..16 {
                    for j in 0..16 {
                        dfk += op[(i, j)] * y[(j, i)];
                    }
                }
                let d_fid = 2.0 * (f.conj() * dfk / 16.0).re;
                for (l, b) in slice.basis.iter().enumerate() {
                    grad[(k, l)] += d_fid * b;
                }
            }
            psi = step * psi;
            xi = xi_next;
        }
        (f.norm_sqr(), grad)
    }

    /// Doubles the step count from `self.steps` until `|F(2S) - F(S)| <= tol`.
    pub fn propagate_converged(&self, pulse: &PulseParams, tol: f64, max_steps: usize) -> Result<Propagation> {
        let mut steps = self.steps;
        let mut prev = self.with_steps(steps).fidelity(pulse);
        loop {
            let next_steps = steps * 2;
            let fine = self.with_steps(next_steps);
            let prop = fine.propagate(pulse);
            let change = (prop.fidelity - prev).abs();
            if change <= tol {
                return Ok(Propagation { step_change: Some(change), ..prop });
            }
            if next_steps * 2 > max_steps {
                return Err(ControlError::NotConverged { steps: next_steps, change });
            }
            steps = next_steps;
            prev = prop.fidelity;
        }
    }
}

/// `U(T)` with the default fourth-order scheme.
pub fn propagate(pulse: &PulseParams, steps: usize) -> Result<Propagation> {
    Ok(ControlProblem::new(steps, "cfm4")?.propagate(pulse))
}

/// Step-doubling propagation to `tol` in fidelity.
pub fn propagate_converged(pulse: &PulseParams, start_steps: usize, tol: f64, max_steps: usize) -> Result<Propagation> {
    ControlProblem::new(start_steps, "cfm4")?.propagate_converged(pulse, tol, max_steps)
}

pub fn fidelity(pulse: &PulseParams, steps: usize) -> Result<f64> {
    Ok(ControlProblem::new(steps, "cfm4")?.fidelity(pulse))
}

pub fn fidelity_and_gradient(pulse: &PulseParams, steps: usize) -> Result<(f64, DMatrix<f64>)> {
    Ok(ControlProblem::new(steps, "cfm4")?.fidelity_and_gradient(pulse))
}

/// Analytic gradient against central differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientCheck {
    /// Largest `|g - fd| / max(|fd|, floor)` over all components.
    pub max_relative_error: f64,
    pub max_abs_error: f64,
    pub worst_component: (usize, usize),
}

/// Componentwise comparison with central differences of step `h`. Components smaller than
/// `floor` are compared in absolute terms against `floor`.
pub fn gradient_check(problem: &ControlProblem, pulse: &PulseParams, h: f64, floor: f64) -> GradientCheck {
    let (_, g) = problem.fidelity_and_gradient(pulse);
    let mut out = GradientCheck { max_relative_error: 0.0, max_abs_error: 0.0, worst_component: (0, 0) };
    for k in 0..pulse.x.nrows() {
        for l in 0..pulse.harmonics() {
            let mut plus = pulse.clone();
            plus.x[(k, l)] += h;
            let mut minus = pulse.clone();
            minus.x[(k, l)] -= h;
            let fd = (problem.fidelity(&plus) - problem.fidelity(&minus)) / (2.0 * h);
            let abs = (g[(k, l)] - fd).abs();
            let rel = abs / fd.abs().max(floor);
            out.max_abs_error = out.max_abs_error.max(abs);
            if rel > out.max_relative_error {
                out.max_relative_error = rel;
                out.worst_component = (k, l + 1);
            }
        }
    }
    out
}
