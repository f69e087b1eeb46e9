use geo_phase::{
    resonance_table, schwinger_identity_check, table_csv, tunneling_phase, OnsiteParams, Sector, LEAKAGE_CONSTANT,
};
use rayon::prelude::*;
use serde::Serialize;
use spin_core::fock::Statistics;

use crate::config::ParamKind::*;
use crate::{CliError, Command, ParamSpec, Run};

const STATISTICS: &[&str] = &["boson", "fermion", "both"];

fn statistics_list(run: &Run) -> Result<Vec<Statistics>, CliError> {
    Ok(match run.config.text("statistics")? {
        "boson" => vec![Statistics::Boson],
        "fermion" => vec![Statistics::Fermion],
        _ => vec![Statistics::Boson, Statistics::Fermion],
    })
}

pub struct Table;

impl Command for Table {
    fn name(&self) -> &'static str {
        "geophase-table"
    }

    fn about(&self) -> &'static str {
        "Exact-rational energy ledger of one-particle tunneling, with the resonant configurations"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("statistics", Text(STATISTICS), Some("both"), "particle statistics"),
            ParamSpec::new("threshold", Float, Some("1.0"), "resonant when |dE1| <= threshold * t"),
            ParamSpec::new("U-over-t", Float, Some("50"), "interaction scale for the numeric check"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let threshold = run.config.float("threshold")?;
        let u_over_t = run.config.float("U-over-t")?;
        for stats in statistics_list(run)? {
            // the symbolic table is always CSV: it is the golden-file format
            run.write_bytes(&format!("geophase-table-{stats}.csv"), table_csv(stats).as_bytes())?;
            let params = OnsiteParams::strongly_interacting(stats, 1.0, u_over_t);
            let resonant: Vec<String> = resonance_table(&params, stats, threshold)
                .iter()
                .filter(|r| r.resonant)
                .map(|r| format!("({},{},{})", r.entry.config.n_l, r.entry.config.n_r_a, r.entry.config.j_r))
                .collect();
            run.say(format!("{stats}: resonant (n_L,n_R_a,j_R) = {{{}}}", resonant.join(", ")));
        }
        Ok(())
    }
}

pub struct Dynamics;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicsRow {
    pub statistics: Statistics,
    pub sector: String,
    pub link: String,
    #[serde(rename = "n_L")]
    pub n_l: u8,
    #[serde(rename = "n_R_a")]
    pub n_r_a: u8,
    pub total_spin: String,
    pub detuning_over_t: f64,
    pub return_time: f64,
    pub phase: f64,
    pub leakage: f64,
    pub max_transfer: f64,
    /// `C (t/dE1)^2`, infinite on resonance.
    pub leakage_bound: f64,
    pub resonant: bool,
}

/// Every sector and spin channel at `U_ab = u_over_t * t` on the table bias.
pub fn dynamics_rows(statistics: &[Statistics], u_over_t: f64) -> Result<Vec<DynamicsRow>, CliError> {
    let jobs: Vec<(Statistics, Sector)> =
        statistics.iter().flat_map(|&s| Sector::ALL.into_iter().map(move |sector| (s, sector))).collect();
    let sectors = jobs
        .par_iter()
        .map(|&(stats, sector)| tunneling_phase(sector, &OnsiteParams::strongly_interacting(stats, 1.0, u_over_t), stats))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(sectors
        .iter()
        .flat_map(|s| {
            s.channels.iter().map(move |c| {
                let resonant = c.detuning <= 1e-9;
                DynamicsRow {
                    statistics: s.statistics,
                    sector: s.sector.label().into(),
                    link: format!("{:?}", c.link.link).to_lowercase(),
                    n_l: c.link.n_l,
                    n_r_a: c.link.n_r_a,
                    total_spin: c.total_spin.to_string(),
                    detuning_over_t: c.detuning,
                    return_time: c.dynamics.return_time,
                    phase: c.dynamics.phase,
                    leakage: c.dynamics.leakage,
                    max_transfer: c.dynamics.max_transfer,
                    leakage_bound: if resonant { f64::INFINITY } else { LEAKAGE_CONSTANT / c.detuning.powi(2) },
                    resonant,
                }
            })
        })
        .collect())
}

impl Command for Dynamics {
    fn name(&self) -> &'static str {
        "geophase-dynamics"
    }

    fn about(&self) -> &'static str {
        "Return phase, time and leakage of resonant tunneling in every spin sector"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![
            ParamSpec::new("statistics", Text(STATISTICS), Some("both"), "particle statistics"),
            ParamSpec::new("U-over-t", Float, Some("50"), "interband interaction over tunneling"),
        ]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let u_over_t = run.config.float("U-over-t")?;
        if !(u_over_t > 0.0) {
            return Err(CliError::Usage(format!("--U-over-t must be positive, got {u_over_t}")));
        }
        let rows = dynamics_rows(&statistics_list(run)?, u_over_t)?;
        for r in rows.iter().filter(|r| r.resonant) {
            run.say(format!(
                "{} {} {} link, S={}: phase {:.6} at t={:.6}, leakage {:.2e}",
                r.statistics, r.sector, r.link, r.total_spin, r.phase, r.return_time, r.leakage
            ));
        }
        run.write_rows("geophase-dynamics", &rows)?;
        Ok(())
    }
}

pub struct Schwinger;

#[derive(Serialize)]
struct SchwingerReport {
    max_particles: usize,
    max_residual: f64,
}

impl Command for Schwinger {
    fn name(&self) -> &'static str {
        "schwinger-check"
    }

    fn about(&self) -> &'static str {
        "Two-mode Schwinger identity for the interband exchange term, checked as matrices"
    }

    fn params(&self) -> Vec<ParamSpec> {
        vec![ParamSpec::new("max-particles", Int, Some("2"), "largest total particle number")]
    }

    fn execute(&self, run: &mut Run) -> Result<(), CliError> {
        let max_particles = run.config.count("max-particles", 0)?;
        let max_residual = schwinger_identity_check(Statistics::Boson, max_particles)?;
        run.say(format!("max residual {max_residual:.3e} up to {max_particles} particles"));
        run.write_json("schwinger-check", &SchwingerReport { max_particles, max_residual })?;
        Ok(())
    }
}
