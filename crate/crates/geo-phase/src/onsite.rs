//! Second-quantized on-site Hamiltonians on the six modes {L_a, R_a, R_b} x {up, down}.

use num_rational::Rational64;
use spin_core::fock::{orbital_spin_squared, FockSpace, Ladder, Statistics};
use spin_core::{eig_hermitian, DenseOperator, C64};

use crate::{GeoError, OnsiteParams, Result};

/// The three orbitals of the double well.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Ground band of the left site.
    LeftGround,
    /// Ground band of the right site.
    RightGround,
    /// Excited band of the right site.
    RightExcited,
}

impl Band {
    pub const ALL: [Band; 3] = [Band::LeftGround, Band::RightGround, Band::RightExcited];

    pub fn up(self) -> usize {
        2 * self as usize
    }

    pub fn down(self) -> usize {
        2 * self as usize + 1
    }

    pub fn orbital(self) -> (usize, usize) {
        (self.up(), self.down())
    }

    pub fn modes(self) -> [usize; 2] {
        [self.up(), self.down()]
    }
}

fn band_count(occ: &[u8], band: Band) -> u8 {
    occ[band.up()] + occ[band.down()]
}

/// Occupation basis of the double well at fixed total particle number.
/// Mode order: L_a up, L_a down, R_a up, R_a down, R_b up, R_b down.
#[derive(Debug, Clone)]
pub struct TwoBandFockSpace {
    fock: FockSpace,
}

impl TwoBandFockSpace {
    pub const MODES: usize = 6;

    pub fn new(statistics: Statistics, particles: usize) -> Self {
        Self { fock: FockSpace::new(statistics, Self::MODES, particles) }
    }

    /// Patterns with the given number of particles in each band.
    pub fn with_band_numbers(statistics: Statistics, n_l: u8, n_a: u8, n_b: u8) -> Self {
        let full = FockSpace::new(statistics, Self::MODES, (n_l + n_a + n_b) as usize);
        let fock = full.filtered(|o| {
            band_count(o, Band::LeftGround) == n_l
                && band_count(o, Band::RightGround) == n_a
                && band_count(o, Band::RightExcited) == n_b
        });
        Self { fock }
    }

    /// Keep only patterns whose total `2 S_z` equals `twice_sz`.
    pub fn with_twice_sz(&self, twice_sz: i32) -> Self {
        let fock = self.fock.filtered(|o| {
            Band::ALL.iter().map(|b| o[b.up()] as i32 - o[b.down()] as i32).sum::<i32>() == twice_sz
        });
        Self { fock }
    }

    pub fn fock(&self) -> &FockSpace {
        &self.fock
    }

    pub fn statistics(&self) -> Statistics {
        self.fock.statistics()
    }

    pub fn dim(&self) -> usize {
        self.fock.dim()
    }

    pub fn band_number(&self, band: Band) -> DenseOperator {
        let [u, d] = band.modes();
        self.fock.diagonal(|o| (o[u] + o[d]) as f64)
    }

    fn band_product(&self, f: impl Fn(f64, f64, f64) -> f64) -> DenseOperator {
        self.fock.diagonal(|o| {
            f(
                band_count(o, Band::LeftGround) as f64,
                band_count(o, Band::RightGround) as f64,
                band_count(o, Band::RightExcited) as f64,
            )
        })
    }

    /// `sum_{s,s'} a+_s b+_s' b_s a_s'` between two bands.
    fn band_exchange(&self, a: Band, b: Band) -> DenseOperator {
        use Ladder::{Annihilate, Create};
        let mut acc = DenseOperator::zeros(self.dim());
        for &s in &[0, 1] {
            for &sp in &[0, 1] {
                let ops = [Create(a.modes()[s]), Create(b.modes()[sp]), Annihilate(b.modes()[s]), Annihilate(a.modes()[sp])];
                acc = &acc + &self.fock.product(&ops);
            }
        }
        acc
    }

    /// `sum_{s,s'} to+_s to+_s' from_s from_s'`, which moves a pair between bands.
    fn pair_transfer(&self, to: Band, from: Band) -> DenseOperator {
        use Ladder::{Annihilate, Create};
        let mut acc = DenseOperator::zeros(self.dim());
        for &s in &[0, 1] {
            for &sp in &[0, 1] {
                let ops = [Create(to.modes()[s]), Create(to.modes()[sp]), Annihilate(from.modes()[s]), Annihilate(from.modes()[sp])];
                acc = &acc + &self.fock.product(&ops);
            }
        }
        acc
    }

    fn double_occupancy(&self, band: Band) -> DenseOperator {
        let [u, d] = band.modes();
        self.fock.diagonal(|o| o[u] as f64 * o[d] as f64)
    }
}

/// `S^2` of the chosen bands.
pub fn spin_squared(space: &TwoBandFockSpace, bands: &[Band]) -> DenseOperator {
    let orbitals: Vec<_> = bands.iter().map(|b| b.orbital()).collect();
    orbital_spin_squared(space.fock(), &orbitals)
}

/// On-site Hamiltonian of both sites, without tunneling.
///
/// Left site: `mu_L n_L + U_L n_L (n_L - 1)` for bosons, `mu_L n_L + U_L n_up n_down` for
/// fermions. Right site: `mu_R n_R + omega n_b` plus intraband and interband interactions.
/// The interband pair-transfer terms `b+ b+ a a + h.c.` change the band energy by
/// `2 omega` and are dropped unless `include_nonconserving` is set.
pub fn onsite_hamiltonian(params: &OnsiteParams, space: &TwoBandFockSpace, include_nonconserving: bool) -> DenseOperator {
    let (l, a, b) = (Band::LeftGround, Band::RightGround, Band::RightExcited);
    let stats = space.statistics();
    let mut h = space.band_product(|nl, na, nb| {
        let mut e = params.mu_l * nl + params.mu_r * (na + nb) + params.omega * nb;
        match stats {
            Statistics::Boson => {
                e += params.u_l_aa * nl * (nl - 1.0);
                e += 0.5 * params.u_r_aa * na * (na - 1.0) + 0.5 * params.u_r_bb * nb * (nb - 1.0);
            }
            Statistics::Fermion => {}
        }
        e + params.u_r_ab * na * nb
    });
    if stats == Statistics::Fermion {
        h = &h + &space.double_occupancy(l).scale_re(params.u_l_aa);
        h = &h + &space.double_occupancy(a).scale_re(params.u_r_aa);
        h = &h + &space.double_occupancy(b).scale_re(params.u_r_bb);
    }
    let exchange_sign = match stats {
        Statistics::Boson => 1.0,
        Statistics::Fermion => -1.0,
    };
    h = &h + &space.band_exchange(a, b).scale_re(exchange_sign * params.u_r_ab);
    if include_nonconserving {
        let pair = space.pair_transfer(b, a);
        h = &h + &(&pair + &pair.adjoint()).scale_re(params.u_r_ab);
    }
    h.hermitian_part()
}

/// `-sum_s (a+_{L,s} b_{R,s} + h.c.)`; multiply by the tunneling rate.
pub fn tunneling_operator(space: &TwoBandFockSpace) -> DenseOperator {
    let (l, b) = (Band::LeftGround, Band::RightExcited);
    let mut acc = DenseOperator::zeros(space.dim());
    for s in 0..2 {
        let hop = space.fock().hop(l.modes()[s], b.modes()[s]);
        acc = &acc + &(&hop + &hop.adjoint());
    }
    acc.scale_re(-1.0).hermitian_part()
}

/// Compare both sides of the Schwinger-representation identity
/// `sum a+_s b+_s' b_s a_s' = n_a n_b + J^2 - (N/2)(N/2 + 1)` on the right site
/// for every total particle number up to `max_particles`; returns the largest deviation.
pub fn schwinger_identity_check(statistics: Statistics, max_particles: usize) -> Result<f64> {
    if statistics != Statistics::Boson {
        return Err(GeoError::NotBosonic);
    }
    let (a, b) = (Band::RightGround, Band::RightExcited);
    let mut worst: f64 = 0.0;
    for n in 0..=max_particles {
        let space = TwoBandFockSpace::new(statistics, n);
        let lhs = space.band_exchange(a, b);
        let j2 = spin_squared(&space, &[a, b]);
        let counts = space.band_product(|_, na, nb| {
            let half = 0.5 * (na + nb);
            na * nb - half * (half + 1.0)
        });
        let rhs = &counts + &j2;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Eigenvalues of the on-site Hamiltonian restricted to fixed band occupations and a
/// fixed right-site spin `j_r`.
pub fn sector_energies(
    params: &OnsiteParams,
    statistics: Statistics,
    band_numbers: (u8, u8, u8),
    j_r: Rational64,
) -> Result<Vec<f64>> {
    let (n_l, n_a, n_b) = band_numbers;
    let space = TwoBandFockSpace::with_band_numbers(statistics, n_l, n_a, n_b);
    let h = onsite_hamiltonian(params, &space, false);
    let s2 = spin_squared(&space, &[Band::RightGround, Band::RightExcited]);
    let j = *j_r.numer() as f64 / *j_r.denom() as f64;
    let basis = eigenspace(&s2, j * (j + 1.0))?;
    if basis.ncols() == 0 {
        return Err(GeoError::SpinOutOfRange { n_a, n_b, j: j_r });
    }
    let projected = basis.adjoint() * h.matrix() * &basis;
    let spectrum = eig_hermitian(&DenseOperator::from_matrix(projected)?)?;
    Ok(spectrum.values().to_vec())
}

/// Orthonormal columns spanning the eigenspace of `op` at `value`.
pub(crate) fn eigenspace(op: &DenseOperator, value: f64) -> Result<spin_core::DMatrix<C64>> {
    let spectrum = eig_hermitian(op)?;
    let cols: Vec<usize> = (0..spectrum.dim()).filter(|&k| (spectrum.values()[k] - value).abs() < 1e-8).collect();
    Ok(spectrum.vectors().select_columns(&cols))
}
