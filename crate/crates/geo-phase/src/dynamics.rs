//! Resonant tunneling across one link of the superplaquette and the phase it leaves behind.

use std::f64::consts::PI;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spin_core::fock::Statistics;
use spin_core::{eig_hermitian, C64};

use crate::ledger::allowed_spins;
use crate::onsite::{eigenspace, onsite_hamiltonian, spin_squared, tunneling_operator, Band, TwoBandFockSpace};
use crate::{delta_e1, GeoError, NumberConfig, OnsiteParams, Result};

/// Bound on the peak population transferred by an off-resonant link:
/// `max_transfer <= LEAKAGE_CONSTANT * (t / dE1)^2`.
///
/// A detuned two-level Rabi cycle transfers at most `4 g^2 / dE1^2`, and the largest
/// coupling is `g = sqrt(2) t` (bosonic enhancement with two particles on the left).
pub const LEAKAGE_CONSTANT: f64 = 8.0;

/// Spin states of the pairs (2,3) and (1',4') before the tilt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    SingletSinglet,
    SingletTriplet,
    TripletSinglet,
    TripletTriplet,
}

impl Sector {
    pub const ALL: [Sector; 4] =
        [Sector::SingletSinglet, Sector::SingletTriplet, Sector::TripletSinglet, Sector::TripletTriplet];

    fn pairs(self) -> (bool, bool) {
        match self {
            Sector::SingletSinglet => (true, true),
            Sector::SingletTriplet => (true, false),
            Sector::TripletSinglet => (false, true),
            Sector::TripletTriplet => (false, false),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sector::SingletSinglet => "SS",
            Sector::SingletTriplet => "ST",
            Sector::TripletSinglet => "TS",
            Sector::TripletTriplet => "TT",
        }
    }
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Sector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Sector::ALL
            .into_iter()
            .find(|x| x.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown sector '{s}' (expected SS, ST, TS or TT)"))
    }
}

/// The two horizontal links joining the plaquettes: 2 to 1' above, 3 to 4' below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Link {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub link: Link,
    pub n_l: u8,
    pub n_r_a: u8,
}

/// Occupations left by the tilt in each sector.
///
/// The tilt pushes particles toward the lower row. A pair that cannot share the lower
/// orbital stays split one per site; a pair that can ends up doubly occupying the lower
/// site. Bosons can share the orbital in the triplet, fermions in the singlet.
pub fn sector_links(sector: Sector, statistics: Statistics) -> [LinkConfig; 2] {
    let split = |singlet: bool| match (statistics, singlet) {
        (Statistics::Boson, true) | (Statistics::Fermion, false) => (1u8, 1u8),
        _ => (0, 2),
    };
    let (left_singlet, right_singlet) = sector.pairs();
    let (l_up, l_down) = split(left_singlet);
    let (r_up, r_down) = split(right_singlet);
    [
        LinkConfig { link: Link::Upper, n_l: l_up, n_r_a: r_up },
        LinkConfig { link: Link::Lower, n_l: l_down, n_r_a: r_down },
    ]
}

/// Outcome of one Rabi return on a link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnDynamics {
    /// First local maximum of the initial-state population after t = 0.
    pub return_time: f64,
    /// Argument of the return amplitude with the unperturbed dynamical phase removed,
    /// wrapped into (-pi/2, 3pi/2].
    pub phase: f64,
    /// `1 - |return amplitude|^2`.
    pub leakage: f64,
    /// Largest population missing from the initial state before the return.
    pub max_transfer: f64,
}

/// Link dynamics in one total-spin channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelDynamics {
    pub link: LinkConfig,
    pub total_spin: Rational64,
    /// Smallest `|dE1|` among configurations this channel can tunnel into.
    pub detuning: f64,
    pub dynamics: ReturnDynamics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorDynamics {
    pub sector: Sector,
    pub statistics: Statistics,
    /// Every active link and spin channel; links with an empty left site are omitted.
    pub channels: Vec<ChannelDynamics>,
}

impl SectorDynamics {
    /// Phase picked up by both links together when each is in spin channel `total_spin`.
    /// Links with no such channel contribute nothing.
    pub fn combined_phase(&self, total_spin: Rational64) -> f64 {
        self.channels.iter().filter(|c| c.total_spin == total_spin).map(|c| c.dynamics.phase).sum()
    }

    pub fn resonant_channels(&self, tolerance: f64) -> impl Iterator<Item = &ChannelDynamics> {
        self.channels.iter().filter(move |c| c.detuning <= tolerance)
    }
}

fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(2.0 * PI);
    if p > 1.5 * PI {
        p -= 2.0 * PI;
    }
    p
}

/// Tunneling dynamics of a link holding `n_l` particles on the left and `n_r_a` in the
/// right ground band, started in the highest-weight state of total spin `total_spin`.
pub fn link_dynamics(
    n_l: u8,
    n_r_a: u8,
    total_spin: Rational64,
    params: &OnsiteParams,
    statistics: Statistics,
) -> Result<ReturnDynamics> {
    let twice_s = (total_spin * 2).to_integer() as i32;
    let s = twice_s as f64 / 2.0;

    let start = TwoBandFockSpace::with_band_numbers(statistics, n_l, n_r_a, 0).with_twice_sz(twice_s);
    let s2 = spin_squared(&start, &Band::ALL);
    let channel = eigenspace(&s2, s * (s + 1.0))?;
    if channel.ncols() != 1 {
        return Err(GeoError::AmbiguousChannel(total_spin));
    }

    let space = TwoBandFockSpace::new(statistics, (n_l + n_r_a) as usize).with_twice_sz(twice_s);
    let mut psi0 = vec![C64::new(0.0, 0.0); space.dim()];
    for k in 0..start.dim() {
        let idx = space.fock().index_of(start.fock().occupations(k)).expect("start pattern lies in the full space");
        psi0[idx] = channel[(k, 0)];
    }

    let onsite = onsite_hamiltonian(params, &space, false);
    let h = &onsite + &tunneling_operator(&space).scale_re(params.tunneling);
    let e0 = psi0
        .iter()
        .enumerate()
        .map(|(r, x)| (0..space.dim()).map(|c| x.conj() * onsite.get(r, c) * psi0[c]).sum::<C64>())
        .sum::<C64>()
        .re;

    let spectrum = eig_hermitian(&h)?;
    let vecs = spectrum.vectors();
    let weights: Vec<(f64, f64)> = (0..spectrum.dim())
        .map(|k| {
            let c: C64 = (0..space.dim()).map(|r| vecs[(r, k)].conj() * psi0[r]).sum();
            (spectrum.values()[k], c.norm_sqr())
        })
        .filter(|&(_, w)| w > 1e-14)
        .collect();

    let amplitude = |t: f64| -> C64 {
        weights.iter().map(|&(e, w)| C64::from_polar(w, -(e - e0) * t)).sum()
    };
    let population = |t: f64| amplitude(t).norm_sqr();

    let (lo, hi) = weights.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(e, _)| (lo.min(e), hi.max(e)));
    let spread = hi - lo;
    if weights.len() < 2 || spread < 1e-12 {
        // no state to tunnel into: the population never leaves
        return Ok(ReturnDynamics { return_time: 0.0, phase: 0.0, leakage: 0.0, max_transfer: 0.0 });
    }
    let min_gap = weights
        .iter()
        .flat_map(|&(a, _)| weights.iter().map(move |&(b, _)| (a - b).abs()))
        .filter(|&g| g > 1e-9)
        .fold(f64::INFINITY, f64::min);

    let dt = 2.0 * PI / spread / 64.0;
    let horizon = 200.0 * 2.0 * PI / min_gap;
    let mut max_transfer: f64 = 0.0;
    let (mut prev, mut cur) = (population(0.0), population(dt));
    let mut t = dt;
    let mut found = None;
    while t < horizon {
        let next = population(t + dt);
        max_transfer = max_transfer.max(1.0 - cur);
        if cur > prev && cur >= next {
            found = Some(t);
            break;
        }
        prev = cur;
        cur = next;
        t += dt;
    }
    let bracket = found.ok_or_else(|| GeoError::Occupation("no population return within the search horizon".into()))?;
    let return_time = golden_max(&population, bracket - dt, bracket + dt);
    let amp = amplitude(return_time);
    Ok(ReturnDynamics {
        return_time,
        phase: wrap_phase(amp.arg()),
        leakage: (1.0 - amp.norm_sqr()).max(0.0),
        max_transfer,
    })
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * b.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

fn band_spin(statistics: Statistics, n: u8) -> Rational64 {
    allowed_spins(statistics, n, 0)[0]
}

/// Smallest energy cost among the configurations reachable from a channel:
/// the right-site spin `j` after tunneling must couple with the remaining left spin to `total_spin`.
fn channel_detuning(link: LinkConfig, total_spin: Rational64, params: &OnsiteParams, statistics: Statistics) -> f64 {
    let left_after = band_spin(statistics, link.n_l - 1);
    allowed_spins(statistics, link.n_r_a, 1)
        .into_iter()
        .filter(|&j| (j - left_after).abs() <= total_spin && total_spin <= j + left_after)
        .filter_map(|j| delta_e1(NumberConfig::new(link.n_l, link.n_r_a, j), params, statistics).ok())
        .map(|(e, _)| e.abs())
        .fold(f64::INFINITY, f64::min)
}

/// Tunneling dynamics of every active link and spin channel of a sector after the tilt.
pub fn tunneling_phase(sector: Sector, params: &OnsiteParams, statistics: Statistics) -> Result<SectorDynamics> {
    let mut jobs = Vec::new();
    for link in sector_links(sector, statistics) {
        if link.n_l == 0 {
            continue;
        }
        let s_left = band_spin(statistics, link.n_l);
        let s_right = band_spin(statistics, link.n_r_a);
        let mut s = (s_left - s_right).abs();
        while s <= s_left + s_right {
            jobs.push((link, s));
            s += 1;
        }
    }
    let channels = jobs
        .into_par_iter()
        .map(|(link, total_spin)| {
            let dynamics = link_dynamics(link.n_l, link.n_r_a, total_spin, params, statistics)?;
            let detuning = channel_detuning(link, total_spin, params, statistics);
            Ok(ChannelDynamics { link, total_spin, detuning, dynamics })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorDynamics { sector, statistics, channels })
}
