use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::propagate::ControlProblem;
use crate::{PulseParams, Result, CONTROL_COUNT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    /// Number of sine harmonics `L`.
    pub harmonics: usize,
    /// Horizon `T`.
    pub horizon: f64,
    pub restarts: usize,
    /// BFGS iteration cap per restart and phase.
    pub max_iter: usize,
    /// Stop once `1 - F` is at or below this.
    pub target_eps: f64,
    /// Steps used during the coarse search.
    pub steps: usize,
    pub integrator: String,
    /// Fidelity change tolerated under step doubling at the returned resolution.
    pub step_tol: f64,
    pub max_steps: usize,
    /// Optional bound `|x_kl| <= b`.
    pub amplitude_bound: Option<f64>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            harmonics: 20,
            horizon: 1.0,
            restarts: 10,
            max_iter: 3000,
            target_eps: 1e-7,
            steps: 200,
            integrator: "cfm4".into(),
            step_tol: 1e-9,
            max_steps: 1 << 14,
            amplitude_bound: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub x_final: PulseParams,
    /// `1 - F` at `steps`.
    pub infidelity: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Restarts run up to and including the returned one.
    pub restarts_used: usize,
    /// Index of the returned restart.
    pub restart_index: usize,
    pub seed: u64,
    pub steps: usize,
    pub integrator: String,
    /// `max_t |a_k(t)|`, the amplitude scale in units of `1/T`.
    pub max_amplitude: f64,
    pub reached_target: bool,
}

struct Minimum {
    x: DVector<f64>,
    value: f64,
    gradient_norm: f64,
    iterations: usize,
}

/// BFGS with Armijo backtracking on `1 - F`.
fn bfgs(
    problem: &ControlProblem,
    shape: (usize, f64),
    x0: DVector<f64>,
    max_iter: usize,
    stop: f64,
    bound: Option<f64>,
) -> Minimum {
    let (harmonics, horizon) = shape;
    let eval = |x: &DVector<f64>| {
        let pulse = PulseParams::from_flat(x.as_slice(), harmonics, horizon).expect("shape");
        let (f, g) = problem.fidelity_and_gradient(&pulse);
        let flat: Vec<f64> = g.transpose().iter().map(|v| -v).collect();
        (1.0 - f, DVector::from_vec(flat))
    };
    let project = |x: &mut DVector<f64>| {
        if let Some(b) = bound {
            x.apply(|v| *v = v.clamp(-b, b));
        }
    };
    let n = x0.len();
    let mut x = x0;
    project(&mut x);
    let (mut value, mut grad) = eval(&x);
    let mut inv_h = DMatrix::<f64>::identity(n, n);
    let mut first = true;
    let mut flat_run = 0;
    let mut iterations = 0;
    while iterations < max_iter && value > stop {
        iterations += 1;
        let mut dir = -(&inv_h * &grad);
        let mut slope = grad.dot(&dir);
        if slope >= 0.0 {
            inv_h.fill_with_identity();
            dir = -grad.clone();
            slope = grad.dot(&dir);
        }
        let mut alpha = if first { (1.0 / grad.norm()).min(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..50 {
            let mut trial = &x + &dir * alpha;
            project(&mut trial);
            let (tv, tg) = eval(&trial);
            if tv <= value + 1e-4 * alpha * slope {
                accepted = Some((trial, tv, tg));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, v_new, g_new)) = accepted else { break };
        let s = &x_new - &x;
        let y = &g_new - &grad;
        let sy = s.dot(&y);
        if sy > 1e-14 * s.norm() * y.norm() {
            if first {
                inv_h *= sy / y.dot(&y);
            }
            let rho = 1.0 / sy;
            let hy = &inv_h * &y;
            let yhy = y.dot(&hy);
            // H <- H - rho (s hy^T + hy s^T) + (rho^2 yHy + rho) s s^T
            inv_h -= (&s * hy.transpose() + &hy * s.transpose()) * rho;
            inv_h += (&s * s.transpose()) * (rho * rho * yhy + rho);
            first = false;
        }
        flat_run = if (value - v_new).abs() < 1e-15 { flat_run + 1 } else { 0 };
        x = x_new;
        value = v_new;
        grad = g_new;
        if flat_run >= 20 || grad.norm() < 1e-14 {
            break;
        }
    }
    Minimum { gradient_norm: grad.norm(), x, value, iterations }
}

fn initial_guess(seed: u64, restart: usize, harmonics: usize) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    DVector::from_iterator(
        CONTROL_COUNT * harmonics,
        (0..CONTROL_COUNT * harmonics).map(|i| {
            let l = (i % harmonics + 1) as f64;
            rng.random_range(-0.5..0.5) * std::f64::consts::PI / l
        }),
    )
}

fn run_restart(coarse: &ControlProblem, opts: &OptimizeOptions, seed: u64, index: usize) -> OptimizationResult {
    let shape = (opts.harmonics, opts.horizon);
    let x0 = initial_guess(seed, index, opts.harmonics);
    let stage = bfgs(coarse, shape, x0, opts.max_iter, opts.target_eps / 4.0, opts.amplitude_bound);
    let mut iterations = stage.iterations;
    let mut best = stage;
    let mut steps = coarse.steps;
    // refine the time grid only for promising runs
    if best.value <= opts.target_eps.sqrt() {
        let pulse = PulseParams::from_flat(best.x.as_slice(), opts.harmonics, opts.horizon).expect("shape");
        steps = match coarse.propagate_converged(&pulse, opts.step_tol, opts.max_steps) {
            Ok(p) => p.steps,
            Err(_) => opts.max_steps,
        };
        let fine = coarse.with_steps(steps);
        let polished = bfgs(&fine, shape, best.x.clone(), opts.max_iter, opts.target_eps / 2.0, opts.amplitude_bound);
        iterations += polished.iterations;
        best = polished;
    } else if steps < opts.max_steps {
        // report at a converged resolution anyway
        let pulse = PulseParams::from_flat(best.x.as_slice(), opts.harmonics, opts.horizon).expect("shape");
        if let Ok(p) = coarse.propagate_converged(&pulse, opts.step_tol, opts.max_steps) {
            steps = p.steps;
            best.value = 1.0 - p.fidelity;
        }
    }
    let x_final = PulseParams::from_flat(best.x.as_slice(), opts.harmonics, opts.horizon).expect("shape");
    let infidelity = best.value.max(0.0);
    OptimizationResult {
        max_amplitude: x_final.max_amplitude(1000),
        x_final,
        infidelity,
        iterations,
        gradient_norm: best.gradient_norm,
        restarts_used: index + 1,
        restart_index: index,
        seed,
        steps,
        integrator: opts.integrator.clone(),
        reached_target: infidelity <= opts.target_eps,
    }
}

/// Seeded multi-start optimization. Restarts run in parallel batches; the earliest restart
/// reaching the target is returned, otherwise the best one. Deterministic for a given seed.
pub fn optimize(seed: u64, opts: &OptimizeOptions) -> Result<OptimizationResult> {
    let coarse = ControlProblem::new(opts.steps, &opts.integrator)?;
    let batch = rayon::current_num_threads().max(1);
    let mut best: Option<OptimizationResult> = None;
    let mut start = 0;
    while start < opts.restarts.max(1) {
        let end = (start + batch).min(opts.restarts.max(1));
        let results: Vec<OptimizationResult> =
            (start..end).into_par_iter().map(|i| run_restart(&coarse, opts, seed, i)).collect();
        for r in results {
            if r.reached_target {
                return Ok(r);
            }
            if best.as_ref().is_none_or(|b| r.infidelity < b.infidelity) {
                best = Some(r);
            }
        }
        start = end;
    }
    let mut out = best.expect("at least one restart");
    out.restarts_used = opts.restarts.max(1);
    Ok(out)
}

/// `1 - F` under the uniformly scaled Hamiltonian `(1 - delta) H` for each deviation.
pub fn robustness_sweep(problem: &ControlProblem, pulse: &PulseParams, deviations: &[f64]) -> Vec<f64> {
    deviations.par_iter().map(|d| (1.0 - problem.fidelity(&pulse.scaled(1.0 - d))).max(0.0)).collect()
}
