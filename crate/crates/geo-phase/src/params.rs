use serde::{Deserialize, Serialize};
use spin_core::fock::Statistics;

/// On-site energies of the double well. `delta()` is the bias between the two sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsiteParams {
    pub mu_l: f64,
    pub mu_r: f64,
    /// Band splitting on the right site.
    pub omega: f64,
    pub u_l_aa: f64,
    pub u_r_aa: f64,
    pub u_r_bb: f64,
    pub u_r_ab: f64,
    pub tunneling: f64,
}

impl OnsiteParams {
    pub fn delta(&self) -> f64 {
        self.mu_l - self.mu_r
    }

    /// Bias at which the tables are quoted: `omega` for bosons, `omega + U_ab` for fermions.
    pub fn table_delta(&self, statistics: Statistics) -> f64 {
        match statistics {
            Statistics::Boson => self.omega,
            Statistics::Fermion => self.omega + self.u_r_ab,
        }
    }

    /// Same interactions with the left level shifted onto the table bias.
    pub fn at_table_bias(mut self, statistics: Statistics) -> Self {
        self.mu_l = self.mu_r + self.table_delta(statistics);
        self
    }

    /// A generic point deep in the interacting regime: `U_ab = u_over_t * t`, the other
    /// interactions deliberately incommensurate with it, band splitting twenty times `U_ab`.
    pub fn strongly_interacting(statistics: Statistics, tunneling: f64, u_over_t: f64) -> Self {
        let u = u_over_t * tunneling;
        Self {
            mu_l: 0.0,
            mu_r: 0.0,
            omega: 20.0 * u,
            u_l_aa: 1.37 * u,
            u_r_aa: 1.11 * u,
            u_r_bb: 0.93 * u,
            u_r_ab: u,
            tunneling,
        }
        .at_table_bias(statistics)
    }

    /// The band-selective description needs `omega` well above `U_ab`.
    pub fn validity_warning(&self) -> Option<String> {
        (self.omega < 10.0 * self.u_r_ab).then(|| {
            format!(
                "band splitting {} is below 10 x U_ab = {}; interband pair terms are not negligible",
                self.omega,
                10.0 * self.u_r_ab
            )
        })
    }
}
