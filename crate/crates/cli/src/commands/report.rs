//! Figure datasets with fixed, documented columns. Each figure writes `report-<figure>.csv`
//! (or `.json`) and, with `--gnuplot`, a `report-<figure>.gp` script that plots it.

use std::path::PathBuf;

use optctrl::{ControlProblem, OptimizationRecord};
use plaquette::plaquette_spectrum;
use serde::Serialize;
use spin_core::fock::Statistics;

use super::geophase::dynamics_rows;
use crate::analysis::{
    allowed_rows, coeff_rows, fidelity_rows, lambda_crossings, loglog_slope, robustness_rows, DEFAULT_DEVIATIONS,
};
use crate::config::ParamKind::*;
use crate::{linspace, CliError, Command, Format, ParamSpec, Run, RunConfig};

const FIGURES: &[&str] = &["spectrum", "lambda", "pertfid", "allowed", "robustness", "tables", "dynamics"];

#[derive(Serialize)]
struct SpectrumRow {
    #[serde(rename = "d_over_J")]
    d_over_j: f64,
    spin: u32,
    degeneracy: usize,
    energy: f64,
}

pub struct Report;

impl Command for Report {
    fn name(&self) -> &'static str {
        "report"
    }

    fn about(&self) -> &'static str {
        "Regenerate the dataset behind one figure or table"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("figure", Text(FIGURES), None, "which dataset"),
            ParamSpec::new("gnuplot", Flag, None, "also write a gnuplot script"),
            ParamSpec::new(
                "input",
                AnyText,
                Some("optctrl-optimize.json"),
                "optimization record for the robustness figure",
            ),
        ]
    }

    fn manifest_stem(&self, config: &RunConfig) -> String {
        match config.text("figure") {
            Ok(f) => format!("report-{f}"),
            Err(_) => "report".into(),
        }
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let figure = run.config.text("figure")?.to_string();
        let stem = format!("report-{figure}");
        let script = match figure.as_str() {
            "spectrum" => {
                let mut rows = Vec::new();
                for d in linspace(0.01, 0.99, 99) {
                    for l in plaquette_spectrum(1.0, d)? {
                        rows.push(SpectrumRow { d_over_j: d, spin: l.spin, degeneracy: l.degeneracy, energy: l.energy });
                    }
                }
                run.write_rows(&stem, &rows)?;
                "set xlabel 'd/J'; set ylabel 'E/J'\nplot for [s=0:2] DATA using 1:(($2==s)?$4:1/0) with points title sprintf('S=%d', s)\n"
            }
            "lambda" => {
                let rows = coeff_rows(&linspace(0.05, 0.95, 181));
                let roots: Vec<String> = lambda_crossings(0.01, 0.99, 981).iter().map(|r| format!("{r:.6}")).collect();
                run.say(format!("lambda_z = 1/8 at d/J = [{}]", roots.join(", ")));
                run.write_rows(&stem, &rows)?;
                "set xlabel 'd/J'; set yrange [-0.5:0.5]\nplot DATA using 1:2 with lines title 'lambda_z', DATA using 1:3 with lines title 'gamma_z', 0.125 title '1/8'\n"
            }
            "pertfid" => {
                let rows = fidelity_rows(
                    &linspace(0.05, 0.95, 91),
                    &[0.05, 0.1, 0.2],
                    1,
                    pert_gate::GateTarget::CzLocal,
                    pert_gate::EchoPulse::Ideal,
                );
                run.write_rows(&stem, &rows)?;
                "set xlabel 'd/J'; set ylabel 'F'\nplot for [jp in '0.05 0.1 0.2'] DATA using 1:(($2==real(jp))?$5:1/0) with lines title 'J''/J='.jp, DATA using 1:7 with lines title 'limit'\n"
            }
            "allowed" => {
                let rows = allowed_rows(
                    &[(1, 1), (3, 4)],
                    0.1,
                    pert_gate::GateTarget::Effective,
                    pert_gate::EchoPulse::Ideal,
                )?;
                run.write_rows(&stem, &rows)?;
                "set xlabel 'd/J'; set ylabel 'lambda_z'\nplot DATA using 4:5 with points pt 7 title 'allowed'\n"
            }
            "robustness" => {
                let given = PathBuf::from(run.config.text("input")?);
                let path = if given.exists() || given.is_absolute() { given } else { run.config.output_dir.join(given) };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                let record = OptimizationRecord::from_json(&text)?;
                let problem = ControlProblem::new(record.steps, &record.integrator)?;
                let rows = robustness_rows(&problem, &record.pulse()?, &DEFAULT_DEVIATIONS);
                if let Some(s) = loglog_slope(&rows, 1e-2, 1e-1) {
                    run.say(format!("log-log slope on [1e-2, 1e-1]: {s:.3}"));
                }
                run.write_rows(&stem, &rows)?;
                "set logscale xy; set xlabel 'dJ/J'; set ylabel '1-F'\nplot DATA using 1:2 with linespoints title 'infidelity'\n"
            }
            "tables" => {
                for stats in [Statistics::Boson, Statistics::Fermion] {
                    run.write_bytes(&format!("{stem}-{stats}.csv"), geo_phase::table_csv(stats).as_bytes())?;
                }
                ""
            }
            "dynamics" => {
                let rows = dynamics_rows(&[Statistics::Boson, Statistics::Fermion], 50.0)?;
                run.write_rows(&stem, &rows)?;
                ""
            }
            other => return Err(CliError::Usage(format!("unknown figure `{other}`"))),
        };
        if run.config.flag("gnuplot")? && !script.is_empty() {
            let data = match run.config.format {
                Format::Csv => format!("{stem}.csv"),
                Format::Json => return Err(CliError::Usage("gnuplot scripts need --format csv".into())),
            };
            let text = format!("set datafile separator ','\nset key autotitle columnhead\nDATA = '{data}'\n{script}");
            run.write_bytes(&format!("{stem}.gp"), text.as_bytes())?;
        }
        Ok(())
    }
}
