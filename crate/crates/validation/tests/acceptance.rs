//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero when any
//! criterion fails. Pass criterion numbers as arguments to run a subset.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;
use std::time::Instant;

use dfsq_cli::analysis::{fidelity_rows, gradient_rows, local_minima, loglog_slope, robustness_rows, DEFAULT_DEVIATIONS};
use geo_phase::{resonance_table, schwinger_identity_check, tunneling_phase, OnsiteParams, Sector, LEAKAGE_CONSTANT};
use optctrl::{control_operators, lie_closure, middle_register, optimize, ControlProblem, OptimizeOptions, PulseParams};
use pert_gate::{allowed_ratios, effective_coeffs, gate_fidelity, gate_time, Branch, EchoPulse, GateTarget, PertParams};
use plaquette::{
    heisenberg_plaquette, logical_basis, plaquette_spectrum, prepare_plus, register, superexchange_hubbard_check,
    PlaquetteCouplings, PrepareMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin_core::fock::Statistics;
use spin_core::{eig_hermitian, pauli_dot, total_spin_component, unitary_evolve, Axis, DenseOperator};

/// Spin `twice / 2` written the way the ledger CSV writes it.
fn half(twice: i64) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Results that later criteria reuse.
#[derive(Default)]
struct Shared {
    optimized: Option<(ControlProblem, PulseParams, f64)>,
}

// ---------------------------------------------------------------- oracles

/// Closed-form plaquette energies for ring coupling `j` and diagonal `d`, each repeated
/// by its multiplet degeneracy.
fn spectrum_oracle(j: f64, d: f64) -> Vec<f64> {
    let mut levels = vec![-4.0 * (j - d), 4.0 * (j - d)];
    levels.extend([4.0 * j; 6]);
    levels.extend([4.0 * d; 3]);
    levels.extend([4.0 * (2.0 * j + d); 5]);
    levels.sort_by(f64::total_cmp);
    levels
}

fn lambda_oracle(r: f64) -> f64 {
    (9.0 / r - 8.0 / (r - 3.0) + 2.0 - 24.0 / (r + 1.0) + 1.0 / (2.0 - r)) / 48.0
}

fn gamma_oracle(r: f64) -> f64 {
    (9.0 / r + 8.0 / (r - 3.0) - 8.0 - 1.0 / (2.0 - r)) / 48.0
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact two-site Hubbard singlet-triplet gap `E_T - E_S`: the pair that may doubly occupy
/// a site (fermion singlet, boson triplet) is pushed down by `(sqrt(U^2 + 16 t^2) - U)/2`.
fn hubbard_gap_oracle(t: f64, u: f64, stats: Statistics) -> f64 {
    let shift = ((u * u + 16.0 * t * t).sqrt() - u) / 2.0;
    match stats {
        Statistics::Fermion => shift,
        Statistics::Boson => -shift,
    }
}

// ---------------------------------------------------------------- criteria

fn c1_spectrum(_: &mut Shared) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut labels_ok = true;
    for _ in 0..100 {
        let j = rng.random_range(0.1..3.0);
        let d = j * rng.random_range(0.001..0.999);
        let offset = 4.0 * j + 2.0 * d;
        let mut got: Vec<f64> = eig_hermitian(&heisenberg_plaquette(&PlaquetteCouplings::diag(j, d)))
            .expect("hermitian")
            .values()
            .iter()
            .map(|e| e + offset)
            .collect();
        got.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(spectrum_oracle(j, d)) {
            worst = worst.max((g - e).abs());
        }
        // multiplet labels: singlets 1+1, triplets 3+3+3, quintet 5
        let levels = plaquette_spectrum(j, d).expect("valid couplings");
        let degs: Vec<(u32, usize)> = levels.iter().map(|l| (l.spin, l.degeneracy)).collect();
        labels_ok &= degs == [(0, 1), (0, 1), (1, 3), (1, 3), (1, 3), (2, 5)];
    }
    Verdict::new(worst <= 1e-10 && labels_ok, format!("max |E - closed form| = {worst:.2e}, multiplet labels ok: {labels_ok}"))
}

fn c2_lambda(_: &mut Shared) -> Verdict {
    let oracle_root = bisect(|r| lambda_oracle(r) - 0.125, 0.3, 0.9);
    let crate_root = bisect(|r| effective_coeffs(1.0, r).unwrap().lambda_z - 0.125, 0.3, 0.9);
    let at_one = effective_coeffs(1.0, 1.0).expect("r = 1 is regular");
    let lam_err = (at_one.lambda_z - 1.0 / 12.0).abs().max((at_one.lambda_z - lambda_oracle(1.0)).abs());
    let gam_err = (at_one.gamma_z + 1.0 / 12.0).abs().max((at_one.gamma_z - gamma_oracle(1.0)).abs());
    let root_ok = (crate_root - 0.62).abs() <= 0.01;
    let values_ok = lam_err <= 1e-12 && gam_err <= 1e-12;
    Verdict::new(
        root_ok && values_ok && (crate_root - oracle_root).abs() < 1e-10,
        format!(
            "root d/J = {crate_root:.6} (oracle {oracle_root:.6}, window 0.62 +- 0.01: {root_ok}); \
             |lambda_z(1) - 1/12| = {lam_err:.1e}, |gamma_z(1) + 1/12| = {gam_err:.1e}"
        ),
    )
}

fn c3_pertfid(_: &mut Shared) -> Verdict {
    let grid: Vec<f64> = (0..91).map(|k| 0.05 + 0.01 * k as f64).collect();
    let couplings = [0.05, 0.1, 0.2];
    let rows = fidelity_rows(&grid, &couplings, 1, GateTarget::CzLocal, EchoPulse::Ideal);
    let at = |jp: f64, d: f64| rows.iter().find(|r| r.jp_over_j == jp && (r.d_over_j - d).abs() < 1e-12);

    // (a) shadow points reach 0.98 for J'/J <= 0.1
    let shadow: Vec<_> = rows.iter().filter(|r| r.shadow && r.ok() && r.jp_over_j <= 0.1).collect();
    let worst = shadow.iter().min_by(|a, b| a.fidelity.total_cmp(&b.fidelity));
    let a_ok = !shadow.is_empty() && shadow.iter().all(|r| r.fidelity >= 0.98);

    // (b) local minima near 0.5 and 0.62 for every coupling
    let mut b_ok = true;
    let mut minima_text = Vec::new();
    for &jp in &couplings {
        let minima = local_minima(&rows, jp);
        for expect in [0.5, 0.62] {
            b_ok &= minima.iter().any(|m| (m - expect).abs() <= 0.03);
        }
        minima_text.push(format!("{jp}: {minima:?}"));
    }

    // (c) fidelity falls with coupling at every shadow point
    let mut c_ok = true;
    let mut checked = 0;
    for &d in &grid {
        let (Some(a), Some(b), Some(c)) = (at(0.05, d), at(0.1, d), at(0.2, d)) else { continue };
        if !(a.shadow && a.ok() && b.ok() && c.ok()) {
            continue;
        }
        checked += 1;
        c_ok &= a.fidelity >= b.fidelity && b.fidelity >= c.fidelity;
    }
    let worst_text = worst.map_or("none".to_string(), |r| {
        format!("min F {:.4} at d/J={:.2}, J'/J={}", r.fidelity, r.d_over_j, r.jp_over_j)
    });
    Verdict::new(
        a_ok && b_ok && c_ok,
        format!(
            "(a) {} shadow points, {worst_text}: {a_ok}; (b) minima {}: {b_ok}; (c) monotone on {checked} points: {c_ok}",
            shadow.len(),
            minima_text.join(", ")
        ),
    )
}

fn c4_allowed(_: &mut Shared) -> Verdict {
    let jp = 0.1;
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, m) in [(1u32, 1u32), (3, 4)] {
        let Ok(all) = allowed_ratios(n, m) else {
            pass = false;
            parts.push(format!("({n},{m}): no allowed ratio"));
            continue;
        };
        let Some(point) = all.iter().find(|r| r.branch == Branch::Above) else {
            pass = false;
            parts.push(format!("({n},{m}): no point on the upper branch"));
            continue;
        };
        let r = point.d_over_j;
        let p = PertParams::new(1.0, r, jp, n, m).expect("valid parameters");
        // back-substitution through the oracle coefficients
        let detuning = lambda_oracle(r) - 0.125;
        let t = gate_time(&p).expect("gate exists");
        let ising = (jp * jp * t * detuning.abs() - (2 * n - 1) as f64 * FRAC_PI_4).abs() / FRAC_PI_4;
        let phase = (jp * jp * t / 2.0 - 2.0 * PI * m as f64).abs() / (2.0 * PI * m as f64);
        let fidelity = gate_fidelity(&p, GateTarget::CzLocal, EchoPulse::Ideal).expect("gate").fidelity;
        let ok = r > 0.0 && r < 1.0 && ising <= 1e-8 && phase <= 1e-8 && fidelity >= 0.98;
        pass &= ok;
        parts.push(format!("({n},{m}) d/J={r:.8}: residuals {ising:.1e}/{phase:.1e}, F={fidelity:.4}"));
    }
    Verdict::new(pass, parts.join("; "))
}

fn c5_lie(_: &mut Shared) -> Verdict {
    let closure = lie_closure(&control_operators().ops, 1e-9, 20).expect("closure saturates");
    let reg = middle_register();
    let product = &pauli_dot(&reg, "2", "3").unwrap() * &pauli_dot(&reg, "1'", "4'").unwrap();
    let residual = closure.membership_residual(&product);
    Verdict::new(
        closure.dimension == 80 && residual <= 1e-8,
        format!("dimension {} (rounds {:?}), product residual {residual:.1e}", closure.dimension, closure.round_dimensions),
    )
}

fn c6_optimize(shared: &mut Shared) -> Verdict {
    let opts = OptimizeOptions { harmonics: 20, restarts: 10, ..OptimizeOptions::default() };
    let result = match optimize(SEED, &opts) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, format!("optimization failed: {e}")),
    };
    let problem = ControlProblem::new(result.steps, &result.integrator).expect("known integrator");
    // independent re-evaluation at twice the resolution
    let recheck = 1.0 - problem.with_steps(2 * result.steps).fidelity(&result.x_final);
    shared.optimized = Some((problem, result.x_final.clone(), result.infidelity));

    let coarse = ControlProblem::new(200, "cfm4").unwrap();
    let grads = gradient_rows(&coarse, 20, 20, 0.5, 1e-4, 1e-3, SEED).expect("valid pulses");
    let grad_err = grads.iter().map(|g| g.max_relative_error).fold(0.0, f64::max);

    let reached = if result.infidelity <= 1e-7 { " (paper-level 1e-7 reached)" } else { "" };
    Verdict::new(
        result.infidelity <= 1e-5 && recheck <= 1e-5 && grad_err <= 1e-5,
        format!(
            "infidelity {:.2e}{reached} after {} restart(s), {} steps, recheck at 2x steps {recheck:.2e}; \
             gradient check max relative error {grad_err:.1e} over {} points",
            result.infidelity,
            result.restarts_used,
            result.steps,
            grads.len()
        ),
    )
}

fn c7_robustness(shared: &mut Shared) -> Verdict {
    if shared.optimized.is_none() {
        c6_optimize(shared);
    }
    let (problem, pulse, _) = shared.optimized.as_ref().expect("criterion 6 ran");
    let rows = robustness_rows(problem, pulse, &DEFAULT_DEVIATIONS);
    let baseline = rows[0].infidelity;
    let slope = loglog_slope(&rows, 1e-2, 1e-1).unwrap_or(f64::NAN);
    let plateau = rows.iter().filter(|r| r.deviation <= 1e-4).map(|r| r.infidelity).fold(0.0, f64::max);
    let ratio = plateau / baseline;
    let slope_ok = (slope - 2.0).abs() <= 0.1;
    let plateau_ok = ratio <= 2.0;
    Verdict::new(
        slope_ok && plateau_ok,
        format!(
            "slope {slope:.3} on [1e-2, 1e-1]: {slope_ok}; baseline {baseline:.2e}, \
             max at dJ/J <= 1e-4 is {plateau:.2e} ({ratio:.1}x): {plateau_ok}"
        ),
    )
}

fn c8_tables(_: &mut Shared) -> Verdict {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../geo-phase/tests/golden");
    let out = tempfile::TempDir::new().expect("temp dir");
    let code = dfsq_cli::run(["dfsq", "--out-dir", out.path().to_str().unwrap(), "geophase-table"]);
    if code != 0 {
        return Verdict::new(false, format!("geophase-table exited with {code}"));
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for stats in [Statistics::Boson, Statistics::Fermion] {
        let generated = std::fs::read_to_string(out.path().join(format!("geophase-table-{stats}.csv"))).unwrap();
        let expected = std::fs::read_to_string(golden.join(format!("table_{stats}.csv"))).unwrap();
        let differing: Vec<String> = generated
            .lines()
            .zip(expected.lines())
            .filter(|(g, e)| g != e)
            .map(|(g, e)| format!("got `{g}` want `{e}`"))
            .collect();
        let same = generated == expected;
        pass &= same;
        parts.push(if same {
            format!("{stats} CSV bit-exact")
        } else {
            format!("{stats} CSV differs in {} row(s): {}", differing.len(), differing.join("; "))
        });
    }
    let expected_sets = [
        (Statistics::Boson, vec![(1, 0, half(1)), (1, 1, half(0))]),
        (Statistics::Fermion, vec![(1, 2, half(1))]),
    ];
    for (stats, want) in expected_sets {
        let params = OnsiteParams::strongly_interacting(stats, 1.0, 50.0);
        let got: Vec<(u8, u8, String)> = resonance_table(&params, stats, 1e-9)
            .iter()
            .filter(|r| r.resonant)
            .map(|r| (r.entry.config.n_l, r.entry.config.n_r_a, r.entry.config.j_r.to_string()))
            .collect();
        let ok = got == want;
        pass &= ok;
        parts.push(format!("{stats} resonant set {got:?}: {ok}"));
    }
    Verdict::new(pass, parts.join("; "))
}

fn c9_dynamics(_: &mut Shared) -> Verdict {
    let mut resonant_err: f64 = 0.0;
    let mut resonant_count = 0;
    let mut worst_phase: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut off_count = 0;
    for stats in [Statistics::Boson, Statistics::Fermion] {
        let params = OnsiteParams::strongly_interacting(stats, 1.0, 50.0);
        for sector in Sector::ALL {
            let dynamics = tunneling_phase(sector, &params, stats).expect("dynamics");
            for c in &dynamics.channels {
                if c.detuning <= 1e-9 {
                    if stats == Statistics::Boson {
                        resonant_count += 1;
                        resonant_err = resonant_err.max((c.dynamics.phase - PI).abs());
                    }
                } else {
                    off_count += 1;
                    let bound = LEAKAGE_CONSTANT * (params.tunneling / c.detuning).powi(2);
                    worst_phase = worst_phase.max(c.dynamics.phase.abs());
                    worst_ratio = worst_ratio.max(c.dynamics.leakage.max(c.dynamics.max_transfer) / bound);
                }
            }
        }
    }
    Verdict::new(
        resonant_count > 0 && resonant_err <= 1e-2 && worst_phase <= 0.1 && worst_ratio <= 1.0,
        format!(
            "{resonant_count} resonant boson channels, max |phase - pi| {resonant_err:.1e}; {off_count} off-resonant \
             channels, max |phase| {worst_phase:.1e}, max leakage / (C (t/dE1)^2) {worst_ratio:.2} with C = {LEAKAGE_CONSTANT}"
        ),
    )
}

fn c10_schwinger(_: &mut Shared) -> Verdict {
    let residual = schwinger_identity_check(Statistics::Boson, 2).expect("bosonic space");
    Verdict::new(residual <= 1e-12, format!("max residual {residual:.1e} up to two particles"))
}

fn c11_properties(_: &mut Shared) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let reg = register();
    let basis = logical_basis();
    let components = [Axis::X, Axis::Y, Axis::Z].map(|a| total_spin_component(&reg, a));

    let mut dfs: f64 = 0.0;
    for _ in 0..50 {
        let field = components
            .iter()
            .fold(DenseOperator::zeros(16), |acc, s| &acc + &s.scale_re(rng.random_range(-3.0..3.0)));
        dfs = dfs.max(field.apply(&basis.ket0).norm()).max(field.apply(&basis.ket1).norm());
    }

    let complement = &DenseOperator::identity(16) - &basis.logical_projector;
    let mut leak: f64 = 0.0;
    for _ in 0..50 {
        let c: [f64; 6] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let couplings = PlaquetteCouplings { j12: c[0], j23: c[1], j34: c[2], j41: c[3], j13: c[4], j24: c[5] };
        let u = unitary_evolve(&heisenberg_plaquette(&couplings), rng.random_range(0.0..10.0)).unwrap();
        leak = leak.max((&complement * &(&u * &basis.logical_projector)).norm_fro());
    }

    let prep = [PrepareMode::TwoStep, PrepareMode::OneStep]
        .map(|m| prepare_plus(m).expect("preparation").fidelity)
        .into_iter()
        .fold(f64::INFINITY, f64::min);

    let mut hubbard_ok = true;
    let mut hubbard_parts = Vec::new();
    for stats in [Statistics::Boson, Statistics::Fermion] {
        for tu in [0.02, 0.05] {
            let gap = superexchange_hubbard_check(tu, 1.0, stats).expect("t/U in range");
            let exact = hubbard_gap_oracle(tu, 1.0, stats);
            let superexchange = if stats == Statistics::Fermion { 4.0 * tu * tu } else { -4.0 * tu * tu };
            let rel = ((gap.exact_gap - superexchange) / superexchange).abs();
            let ok = (gap.exact_gap - exact).abs() <= 1e-12 && rel <= 5.0 * tu * tu;
            hubbard_ok &= ok;
            hubbard_parts.push(format!("{stats} {tu}: {rel:.2e}"));
        }
    }
    let pass = dfs <= 1e-12 && leak <= 1e-10 && prep >= 1.0 - 1e-10 && hubbard_ok;
    Verdict::new(
        pass,
        format!(
            "field on logical states {dfs:.1e}, leakage under superexchange {leak:.1e}, prepare_plus F >= {prep:.12}, \
             Hubbard relative error vs 5(t/U)^2 [{}]",
            hubbard_parts.join(", ")
        ),
    )
}

type Criterion = fn(&mut Shared) -> Verdict;

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("plaquette spectrum", c1_spectrum),
        ("lambda_z crossing and values", c2_lambda),
        ("perturbative gate fidelity sweep", c3_pertfid),
        ("allowed ratios", c4_allowed),
        ("Lie closure", c5_lie),
        ("optimal control", c6_optimize),
        ("robustness", c7_robustness),
        ("geometric-phase ledgers", c8_tables),
        ("tunneling dynamics", c9_dynamics),
        ("Schwinger identity", c10_schwinger),
        ("property suite", c11_properties),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut shared = Shared::default();
    let mut failed = Vec::new();
    println!("acceptance: {} criteria", criteria.len());
    for (i, (name, check)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let verdict = check(&mut shared);
        let secs = start.elapsed().as_secs_f64();
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        println!("{tag} {number:>2} {name} [{secs:.1} s]: {}", verdict.detail);
        if !verdict.pass {
            failed.push(number);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
