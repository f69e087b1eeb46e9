use pert_gate::{validate_effective, PertParams};
use serde::Serialize;

use crate::analysis::{allowed_rows, coeff_rows, fidelity_rows, local_minima, parse_echo, parse_target};
use crate::config::ParamKind::*;
use crate::{linspace, CliError, Command, ParamSpec, Run};

const TARGETS: &[&str] = &["cz-local", "effective"];
const ECHOES: &[&str] = &["ideal", "composite"];

fn ratio_grid(run: &Run) -> Result<Vec<f64>, CliError> {
    let lo = run.config.float("dJ-min")?;
    let hi = run.config.float("dJ-max")?;
    let points = run.config.count("points", 1)?;
    if points > 1 && !(lo < hi) {
        return Err(CliError::Usage(format!("--dJ-min {lo} must be below --dJ-max {hi}")));
    }
    Ok(linspace(lo, hi, points))
}

/// `"1:1,3:4"` into `[(1, 1), (3, 4)]`.
fn parse_pairs(s: &str) -> Result<Vec<(u32, u32)>, CliError> {
    s.split(',')
        .map(|p| {
            let (n, m) = p.trim().split_once(':').ok_or_else(|| CliError::Usage(format!("expected n:m, got `{p}`")))?;
            let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| CliError::Usage(format!("bad index `{x}`: {e}")));
            Ok((parse(n)?, parse(m)?))
        })
        .collect()
}

pub struct Coeffs;

impl Command for Coeffs {
    fn name(&self) -> &'static str {
        "pert-coeffs"
    }

    fn about(&self) -> &'static str {
        "Effective-Hamiltonian coefficients lambda_z and gamma_z against d/J"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("dJ-min", Float, Some("0.05"), "smallest d/J"),
            ParamSpec::new("dJ-max", Float, Some("0.95"), "largest d/J"),
            ParamSpec::new("points", Int, Some("181"), "grid points"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let rows = coeff_rows(&ratio_grid(run)?);
        run.say(format!("{} coefficient rows", rows.len()));
        run.write_rows("pert-coeffs", &rows)?;
        Ok(())
    }
}

pub struct Fidelity;

impl Command for Fidelity {
    fn name(&self) -> &'static str {
        "pert-fidelity"
    }

    fn about(&self) -> &'static str {
        "Echo-gate fidelity on the superplaquette over a d/J grid for each J'/J"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("dJ-min", Float, Some("0.05"), "smallest d/J"),
            ParamSpec::new("dJ-max", Float, Some("0.95"), "largest d/J"),
            ParamSpec::new("points", Int, Some("91"), "grid points along d/J"),
            ParamSpec::new("Jp", FloatList, Some("0.05,0.1,0.2"), "inter-plaquette couplings J'/J"),
            ParamSpec::new("n", Int, Some("1"), "gate index, phase (2n-1) pi/4"),
            ParamSpec::new("target", Text(TARGETS), Some("cz-local"), "reference gate"),
            ParamSpec::new("echo", Text(ECHOES), Some("ideal"), "echo pulse"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let grid = ratio_grid(run)?;
        let jps = run.config.floats("Jp")?;
        let n = run.config.count("n", 1)? as u32;
        let target = parse_target(run.config.text("target")?)?;
        let echo = parse_echo(run.config.text("echo")?)?;
        let rows = fidelity_rows(&grid, &jps, n, target, echo);
        let failed = rows.iter().filter(|r| !r.ok()).count();
        for &jp in &jps {
            let minima: Vec<String> = local_minima(&rows, jp).iter().map(|d| format!("{d:.3}")).collect();
            run.say(format!("J'/J={jp}: local minima of F at d/J = [{}]", minima.join(", ")));
        }
        if failed > 0 {
            run.say(format!("{failed} grid points without a gate (flagged in `status`)"));
        }
        run.write_rows("pert-fidelity", &rows)?;
        Ok(())
    }
}

pub struct Allowed;

impl Command for Allowed {
    fn name(&self) -> &'static str {
        "pert-allowed"
    }

    fn about(&self) -> &'static str {
        "Ratios d/J where the Ising and Heisenberg phase conditions hold together"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("pairs", AnyText, Some("1:1,3:4"), "comma separated n:m pairs"),
            ParamSpec::new("Jp", Float, Some("0.1"), "inter-plaquette coupling J'/J"),
            ParamSpec::new("target", Text(TARGETS), Some("effective"), "reference gate"),
            ParamSpec::new("echo", Text(ECHOES), Some("ideal"), "echo pulse"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let pairs = parse_pairs(run.config.text("pairs")?)?;
        let target = parse_target(run.config.text("target")?)?;
        let echo = parse_echo(run.config.text("echo")?)?;
        let rows = allowed_rows(&pairs, run.config.float("Jp")?, target, echo)?;
        for r in &rows {
            run.say(format!(
                "(n,m)=({},{}) d/J={:.10} F={:.6} residuals {:.1e} {:.1e}",
                r.n, r.m, r.d_over_j, r.fidelity, r.ising_residual, r.phase_residual
            ));
        }
        run.write_rows("pert-allowed", &rows)?;
        Ok(())
    }
}

pub struct Validate;

#[derive(Serialize)]
struct Validation {
    #[serde(rename = "d_over_J")]
    d_over_j: f64,
    #[serde(rename = "Jp_over_J")]
    jp_over_j: f64,
    horizon: f64,
    samples: usize,
    max_infidelity: f64,
    warning: Option<String>,
}

impl Command for Validate {
    fn name(&self) -> &'static str {
        "pert-validate"
    }

    fn about(&self) -> &'static str {
        "Full superplaquette dynamics against the rotating-wave effective model"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("dJ", Float, Some("0.3"), "d/J"),
            ParamSpec::new("Jp", Float, Some("0.05"), "J'/J"),
            ParamSpec::new("horizon", Float, Some("50"), "longest time, units of 1/J"),
            ParamSpec::new("samples", Int, Some("50"), "evenly spaced times"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let p = PertParams::from_ratios(run.config.float("dJ")?, run.config.float("Jp")?, 1)?;
        let horizon = run.config.float("horizon")?;
        let samples = run.config.count("samples", 1)?;
        let max_infidelity = validate_effective(&p, horizon, samples)?;
        let warning = p.validity_warning();
        run.say(format!("max state infidelity {max_infidelity:.3e}"));
        if let Some(w) = &warning {
            run.say(format!("warning: {w}"));
        }
        let v = Validation { d_over_j: p.d, jp_over_j: p.jp, horizon, samples, max_infidelity, warning };
        run.write_json("pert-validate", &v)?;
        Ok(())
    }
}
