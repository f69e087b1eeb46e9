use plaquette::{plaquette_spectrum, prepare_plus, superexchange_hubbard_check, PrepareMode};
use serde::Serialize;
use spin_core::fock::Statistics;

use crate::config::ParamKind::*;
use crate::{CliError, Command, ParamSpec, Run};

pub struct Spectrum;

impl Command for Spectrum {
    fn name(&self) -> &'static str {
        "spectrum"
    }

    fn about(&self) -> &'static str {
        "Spin multiplets of one plaquette with side coupling J and diagonal coupling d"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("J", Float, Some("1.0"), "side coupling"),
            ParamSpec::new("d", Float, Some("0.5"), "diagonal coupling"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let levels = plaquette_spectrum(run.config.float("J")?, run.config.float("d")?)?;
        for l in &levels {
            run.say(format!("S={} x{}  E={:.12}", l.spin, l.degeneracy, l.energy));
        }
        run.write_rows("spectrum", &levels)?;
        Ok(())
    }
}

pub struct PreparePlus;

#[derive(Serialize)]
struct Prepared {
    mode: PrepareMode,
    fidelity: f64,
    leakage: f64,
}

impl Command for PreparePlus {
    fn name(&self) -> &'static str {
        "prepare-plus"
    }

    fn about(&self) -> &'static str {
        "Prepare the logical |+> state from |0> with superexchange pulses"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![ParamSpec::new("mode", Text(&["two-step", "one-step"]), Some("two-step"), "pulse sequence")]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let mode = match run.config.text("mode")? {
            "one-step" => PrepareMode::OneStep,
            _ => PrepareMode::TwoStep,
        };
        let p = prepare_plus(mode)?;
        run.say(format!("fidelity {:.15}  leakage {:.3e}", p.fidelity, p.leakage));
        run.write_json("prepare-plus", &Prepared { mode, fidelity: p.fidelity, leakage: p.leakage })?;
        Ok(())
    }
}

pub struct HubbardCheck;

#[derive(Serialize)]
struct HubbardRow {
    statistics: Statistics,
    t_over_u: f64,
    /// Gaps in units of `t`.
    exact_gap: f64,
    perturbative_gap: f64,
    relative_error: f64,
    /// `5 (t/U)^2`.
    bound: f64,
    within_bound: bool,
}

impl Command for HubbardCheck {
    fn name(&self) -> &'static str {
        "hubbard-check"
    }

    fn about(&self) -> &'static str {
        "Two-site Hubbard singlet-triplet gap against the superexchange scale 4t^2/U"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![ParamSpec::new("t-over-U", FloatList, Some("0.02,0.05"), "tunneling over interaction, comma separated")]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let mut rows = Vec::new();
        for stats in [Statistics::Boson, Statistics::Fermion] {
            for x in run.config.floats("t-over-U")? {
                let g = superexchange_hubbard_check(x, 1.0, stats)?;
                let bound = 5.0 * x * x;
                let row = HubbardRow {
                    statistics: stats,
                    t_over_u: x,
                    exact_gap: g.exact_gap / x,
                    perturbative_gap: g.perturbative_gap / x,
                    relative_error: g.relative_error(),
                    bound,
                    within_bound: g.relative_error() <= bound,
                };
                run.say(format!(
                    "{stats} t/U={x}: gap {:.10} t, superexchange {:.10} t, relative error {:.3e} (bound {bound:.1e})",
                    row.exact_gap, row.perturbative_gap, row.relative_error
                ));
                rows.push(row);
            }
        }
        run.write_rows("hubbard-check", &rows)?;
        Ok(())
    }
}
