use std::path::PathBuf;

use optctrl::{
    control_operators, integrator_names, lie_closure, middle_register, optimize, write_pulse_csv, ControlProblem,
    OptimizationRecord, OptimizeOptions,
};
use serde::Serialize;
use sha2::{Digest, Sha256};
use spin_core::pauli_dot;

use crate::analysis::{gradient_rows, loglog_slope, robustness_rows, DEFAULT_DEVIATIONS};
use crate::config::ParamKind::*;
use crate::{CliError, Command, ParamSpec, Run};

const DEVIATIONS: &str = "0,1e-6,1e-5,3e-5,1e-4,3e-4,1e-3,3e-3,1e-2,2e-2,4e-2,7e-2,1e-1";

pub struct Optimize;

impl Command for Optimize {
    fn name(&self) -> &'static str {
        "optctrl-optimize"
    }

    fn about(&self) -> &'static str {
        "Optimize smooth pulses for the controlled-phase gate on the four middle spins"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("L", Int, Some("20"), "sine harmonics per control"),
            ParamSpec::new("T", Float, Some("1.0"), "pulse duration"),
            ParamSpec::new("restarts", Int, Some("10"), "seeded restarts"),
            ParamSpec::new("target", Float, Some("1e-7"), "stop once the infidelity is this small"),
            ParamSpec::new("accept", Float, Some("1e-5"), "exit with status 3 above this infidelity"),
            ParamSpec::new("steps", Int, Some("200"), "time slices of the coarse search"),
            ParamSpec::new("integrator", Text(integrator_names()), Some("cfm4"), "propagator"),
            ParamSpec::new("max-iter", Int, Some("3000"), "quasi-Newton iterations per restart"),
            ParamSpec::new("bound", Float, Some("0"), "box bound on coefficients, 0 for none"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let c = &run.config;
        let bound = c.float("bound")?;
        let opts = OptimizeOptions {
            harmonics: c.count("L", 1)?,
            horizon: c.float("T")?,
            restarts: c.count("restarts", 1)?,
            max_iter: c.count("max-iter", 1)?,
            target_eps: c.float("target")?,
            steps: c.count("steps", 1)?,
            integrator: c.text("integrator")?.to_string(),
            amplitude_bound: (bound > 0.0).then_some(bound),
            ..OptimizeOptions::default()
        };
        let accept = c.float("accept")?;
        let result = optimize(run.config.seed, &opts)?;
        let record = OptimizationRecord::from(&result);
        run.say(format!(
            "infidelity {:.3e} after {} restart(s), {} steps, max amplitude {:.2}",
            result.infidelity, result.restarts_used, result.steps, result.max_amplitude
        ));
        run.write_bytes("optctrl-optimize.json", format!("{}\n", record.to_json()?).as_bytes())?;
        let mut pulse = Vec::new();
        write_pulse_csv(&result.x_final, &mut pulse)?;
        run.write_bytes("optctrl-pulse.csv", &pulse)?;
        if result.infidelity > accept {
            return Err(CliError::NotConverged(format!("infidelity {:.3e} above {accept:e}", result.infidelity)));
        }
        Ok(())
    }
}

pub struct GradCheck;

impl Command for GradCheck {
    fn name(&self) -> &'static str {
        "optctrl-gradcheck"
    }

    fn about(&self) -> &'static str {
        "Analytic fidelity gradient against central finite differences at random pulses"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("points", Int, Some("20"), "random pulses"),
            ParamSpec::new("L", Int, Some("20"), "sine harmonics per control"),
            ParamSpec::new("h", Float, Some("1e-4"), "finite-difference step"),
            ParamSpec::new("floor", Float, Some("1e-3"), "gradient magnitude below which errors are absolute"),
            ParamSpec::new("scale", Float, Some("0.5"), "coefficients drawn from (-scale, scale)"),
            ParamSpec::new("steps", Int, Some("200"), "time slices"),
            ParamSpec::new("integrator", Text(integrator_names()), Some("cfm4"), "propagator"),
            ParamSpec::new("tol", Float, Some("1e-5"), "relative error counted as agreement"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let c = &run.config;
        let problem = ControlProblem::new(c.count("steps", 1)?, c.text("integrator")?)?;
        let rows = gradient_rows(
            &problem,
            c.count("points", 1)?,
            c.count("L", 1)?,
            c.float("scale")?,
            c.float("h")?,
            c.float("floor")?,
            c.seed,
        )?;
        let tol = c.float("tol")?;
        let worst = rows.iter().map(|r| r.max_relative_error).fold(0.0, f64::max);
        run.say(format!("max relative gradient error {worst:.3e} over {} points (tolerance {tol:e})", rows.len()));
        run.write_rows("optctrl-gradcheck", &rows)?;
        Ok(())
    }
}

pub struct Robustness;

#[derive(Serialize)]
struct RobustnessSummary {
    input_sha256: String,
    baseline: f64,
    /// Log-log slope over `1e-2 <= dJ/J <= 1e-1`.
    slope: Option<f64>,
    /// Largest infidelity at `dJ/J <= 1e-4`, over the baseline.
    plateau_ratio: Option<f64>,
}

impl Command for Robustness {
    fn name(&self) -> &'static str {
        "optctrl-robustness"
    }

    fn about(&self) -> &'static str {
        "Infidelity of an optimized pulse under a global coupling error (1 - dJ/J) H"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new(
                "input",
                AnyText,
                Some("optctrl-optimize.json"),
                "optimization record; relative paths not found are looked up in the output directory",
            ),
            ParamSpec::new("deviations", FloatList, Some(DEVIATIONS), "relative coupling errors dJ/J"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        debug_assert_eq!(DEVIATIONS.split(',').count(), DEFAULT_DEVIATIONS.len());
        let given = PathBuf::from(run.config.text("input")?);
        let path = if given.exists() || given.is_absolute() { given } else { run.config.output_dir.join(given) };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let record = OptimizationRecord::from_json(&text)?;
        let problem = ControlProblem::new(record.steps, &record.integrator)?;
        let deviations = run.config.floats("deviations")?;
        let rows = robustness_rows(&problem, &record.pulse()?, &deviations);
        let baseline = problem.fidelity(&record.pulse()?);
        let baseline = (1.0 - baseline).max(0.0);
        let slope = loglog_slope(&rows, 1e-2, 1e-1);
        let plateau = rows.iter().filter(|r| r.deviation <= 1e-4).map(|r| r.infidelity).reduce(f64::max);
        let plateau_ratio = plateau.filter(|_| baseline > 0.0).map(|p| p / baseline);
        run.say(format!("baseline infidelity {baseline:.3e}"));
        if let Some(s) = slope {
            run.say(format!("log-log slope on [1e-2, 1e-1]: {s:.3}"));
        }
        if let Some(r) = plateau_ratio {
            run.say(format!("plateau (dJ/J <= 1e-4) over baseline: {r:.2}"));
        }
        run.write_rows("optctrl-robustness", &rows)?;
        let summary = RobustnessSummary {
            input_sha256: hex::encode(Sha256::digest(text.as_bytes())),
            baseline,
            slope,
            plateau_ratio,
        };
        run.write_json("optctrl-robustness-summary", &summary)?;
        Ok(())
    }
}

pub struct LieDim;

#[derive(Serialize)]
struct LieReport {
    dimension: usize,
    round_dimensions: Vec<usize>,
    extra_round_rank: usize,
    /// Residual of `(s2.s3)(s1'.s4')` against the closed span.
    product_residual: f64,
}

impl Command for LieDim {
    fn name(&self) -> &'static str {
        "optctrl-liedim"
    }

    fn about(&self) -> &'static str {
        "Dimension of the Lie algebra generated by the five control Hamiltonians"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![ParamSpec::new("tol", Float, Some("1e-9"), "relative rank tolerance")]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let closure = lie_closure(&control_operators().ops, run.config.float("tol")?, 20)?;
        let reg = middle_register();
        let product = &pauli_dot(&reg, "2", "3")? * &pauli_dot(&reg, "1'", "4'")?;
        let report = LieReport {
            dimension: closure.dimension,
            round_dimensions: closure.round_dimensions.clone(),
            extra_round_rank: closure.extra_round_rank(),
            product_residual: closure.membership_residual(&product),
        };
        run.say(report.dimension.to_string());
        run.say(format!(
            "rounds {:?}, product residual {:.2e}, extra round rank {}",
            report.round_dimensions, report.product_residual, report.extra_round_rank
        ));
        run.write_json("optctrl-liedim", &report)?;
        Ok(())
    }
}
