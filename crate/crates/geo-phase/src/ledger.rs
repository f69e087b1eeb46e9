//! Exact energy bookkeeping for moving one particle from the left ground band into
//! the right excited band.

use std::io::Write;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use spin_core::fock::Statistics;

use crate::{GeoError, OnsiteParams, Result};

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn half(n: u8) -> Rational64 {
    rat(n as i64, 2)
}

/// Occupations before the tunneling event and the total right-site spin after it.
///
/// `n_r_b` counts excited-band particles before the event; the tables start from an
/// empty excited band, so after tunneling it holds `n_r_b + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumberConfig {
    pub n_l: u8,
    pub n_r_a: u8,
    pub n_r_b: u8,
    pub j_r: Rational64,
}

impl NumberConfig {
    pub fn new(n_l: u8, n_r_a: u8, j_r: Rational64) -> Self {
        Self { n_l, n_r_a, n_r_b: 0, j_r }
    }

    /// Excited-band occupation once the particle has tunneled.
    pub fn n_b_after(&self) -> u8 {
        self.n_r_b + 1
    }

    fn check(&self, statistics: Statistics) -> Result<()> {
        let cap = 2;
        if self.n_l == 0 {
            return Err(GeoError::Occupation("no particle on the left site to tunnel".into()));
        }
        if self.n_l > cap || self.n_r_a > cap || self.n_b_after() > cap {
            return Err(GeoError::Occupation(format!(
                "occupations ({}, {}, {}) exceed two per band",
                self.n_l,
                self.n_r_a,
                self.n_b_after()
            )));
        }
        if self.n_r_b != 0 {
            return Err(GeoError::Occupation("the ledger starts from an empty excited band".into()));
        }
        check_spin(statistics, self.n_r_a, self.n_b_after(), self.j_r)
    }
}

/// Spin carried by a single band holding `n` particles.
/// Bosons in one orbital are fully symmetric, fermions pair into a singlet.
fn band_spin(statistics: Statistics, n: u8) -> Rational64 {
    match statistics {
        Statistics::Boson => half(n),
        Statistics::Fermion => {
            if n == 1 {
                rat(1, 2)
            } else {
                Rational64::zero()
            }
        }
    }
}

/// Right-site spins reachable with band occupations `(n_a, n_b)`.
pub(crate) fn allowed_spins(statistics: Statistics, n_a: u8, n_b: u8) -> Vec<Rational64> {
    let sa = band_spin(statistics, n_a);
    let sb = band_spin(statistics, n_b);
    let mut j = (sa - sb).abs();
    let mut out = Vec::new();
    while j <= sa + sb {
        out.push(j);
        j += 1;
    }
    out
}

fn check_spin(statistics: Statistics, n_a: u8, n_b: u8, j: Rational64) -> Result<()> {
    if allowed_spins(statistics, n_a, n_b).contains(&j) {
        Ok(())
    } else {
        Err(GeoError::SpinOutOfRange { n_a, n_b, j })
    }
}

/// `2 n_a n_b - ((n_a+n_b)/2)((n_a+n_b)/2 + 1) + j(j+1)`: the interband interaction
/// energy of the right site in units of `U_ab`, for bosons.
pub fn boson_f(n_a: u8, n_b: u8, j: Rational64) -> Result<Rational64> {
    check_spin(Statistics::Boson, n_a, n_b, j)?;
    let total = half(n_a + n_b);
    let pair = rat(2 * n_a as i64 * n_b as i64, 1);
    Ok(pair - total * (total + 1) + j * (j + 1))
}

/// Exchange correction for fermions after the tunneling event (one excited particle):
/// `3 - 4j` when the ground band holds a single particle, zero otherwise.
pub fn fermion_eta(n_a: u8, j: Rational64) -> Rational64 {
    if n_a == 1 {
        rat(3, 1) - rat(4, 1) * j
    } else {
        Rational64::zero()
    }
}

/// `dE1 = c0 (Delta - omega) + c1 U_L + c2 U_ab` with exact coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyLedgerEntry {
    pub statistics: Statistics,
    pub config: NumberConfig,
    pub c0: Rational64,
    pub c1: Rational64,
    pub c2: Rational64,
    /// Whether the energy cost vanishes identically at the table bias.
    pub resonant_at_bias: bool,
}

impl EnergyLedgerEntry {
    pub fn evaluate(&self, params: &OnsiteParams) -> f64 {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        f(self.c0) * (params.delta() - params.omega) + f(self.c1) * params.u_l_aa + f(self.c2) * params.u_r_ab
    }

    /// Coefficients with the table bias substituted, so that `c0` multiplies the
    /// residual detuning `Delta - omega - bias * U_ab`.
    pub fn at_table_bias(&self) -> (Rational64, Rational64, Rational64) {
        (self.c0, self.c1, self.c2 + self.c0 * table_bias(self.statistics))
    }
}

/// Table bias in units of `U_ab`: the tables quote bosons at `Delta = omega` and
/// fermions at `Delta = omega + U_ab`.
pub fn table_bias(statistics: Statistics) -> Rational64 {
    match statistics {
        Statistics::Boson => Rational64::zero(),
        Statistics::Fermion => rat(1, 1),
    }
}

/// Symbolic ledger entry for one configuration.
pub fn ledger_entry(config: NumberConfig, statistics: Statistics) -> Result<EnergyLedgerEntry> {
    config.check(statistics)?;
    let one = rat(1, 1);
    let (c1, c2) = match statistics {
        // left site: U_L n (n - 1), so removing one particle saves 2 U_L (n - 1)
        Statistics::Boson => (
            rat(2 * (config.n_l as i64 - 1), 1),
            -boson_f(config.n_r_a, config.n_b_after(), config.j_r)?,
        ),
        Statistics::Fermion => {
            let c1 = if config.n_l == 2 { one } else { Rational64::zero() };
            let c2 = -rat(1, 2) * (rat(config.n_r_a as i64, 1) + fermion_eta(config.n_r_a, config.j_r));
            (c1, c2)
        }
    };
    let mut entry = EnergyLedgerEntry { statistics, config, c0: one, c1, c2, resonant_at_bias: false };
    let (_, b1, b2) = entry.at_table_bias();
    entry.resonant_at_bias = b1.is_zero() && b2.is_zero();
    Ok(entry)
}

/// Closed-form energy cost evaluated directly in floating point.
pub fn matrix_free_delta_e1(config: NumberConfig, params: &OnsiteParams, statistics: Statistics) -> Result<f64> {
    config.check(statistics)?;
    let detuning = params.delta() - params.omega;
    let n_l = config.n_l as f64;
    let n_a = config.n_r_a as f64;
    let j = *config.j_r.numer() as f64 / *config.j_r.denom() as f64;
    Ok(match statistics {
        Statistics::Boson => {
            let n_b = config.n_b_after() as f64;
            let total = 0.5 * (n_a + n_b);
            let f = 2.0 * n_a * n_b - total * (total + 1.0) + j * (j + 1.0);
            detuning + 2.0 * params.u_l_aa * (n_l - 1.0) - params.u_r_ab * f
        }
        Statistics::Fermion => {
            let eta = if config.n_r_a == 1 { 3.0 - 4.0 * j } else { 0.0 };
            let left = if config.n_l == 2 { params.u_l_aa } else { 0.0 };
            detuning - 0.5 * params.u_r_ab * (n_a + eta) + left
        }
    })
}

/// Energy cost of one tunneling event and its exact ledger entry.
pub fn delta_e1(
    config: NumberConfig,
    params: &OnsiteParams,
    statistics: Statistics,
) -> Result<(f64, EnergyLedgerEntry)> {
    let entry = ledger_entry(config, statistics)?;
    Ok((entry.evaluate(params), entry))
}

/// Every configuration appearing in the tables: a singly occupied left site facing zero to
/// two ground-band particles, or a doubly occupied one facing one or two, with all
/// reachable right-site spins.
pub fn table_configs(statistics: Statistics) -> Vec<NumberConfig> {
    let mut out = Vec::new();
    for n_l in 1..=2u8 {
        for n_a in (n_l - 1)..=2u8 {
            for j in allowed_spins(statistics, n_a, 1) {
                out.push(NumberConfig::new(n_l, n_a, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub entry: EnergyLedgerEntry,
    pub energy: f64,
    pub resonant: bool,
}

/// All table configurations, marked resonant when `|dE1| <= threshold * t`.
pub fn resonance_table(params: &OnsiteParams, statistics: Statistics, threshold: f64) -> Vec<TableRow> {
    table_configs(statistics)
        .into_iter()
        .map(|config| {
            let (energy, entry) = delta_e1(config, params, statistics).expect("table configs are valid");
            TableRow { entry, energy, resonant: energy.abs() <= threshold * params.tunneling }
        })
        .collect()
}

/// CSV export of the symbolic table at the table bias.
/// Columns: statistics, n_L, n_R_a, j_R, c0, c1, c2, resonant.
pub fn write_table_csv<W: Write>(statistics: Statistics, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["statistics", "n_L", "n_R_a", "j_R", "c0", "c1", "c2", "resonant"])?;
    for config in table_configs(statistics) {
        let entry = ledger_entry(config, statistics)?;
        let (c0, c1, c2) = entry.at_table_bias();
        w.write_record([
            statistics.to_string(),
            config.n_l.to_string(),
            config.n_r_a.to_string(),
            config.j_r.to_string(),
            c0.to_string(),
            c1.to_string(),
            c2.to_string(),
            entry.resonant_at_bias.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn table_csv(statistics: Statistics) -> String {
    let mut buf = Vec::new();
    write_table_csv(statistics, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}
