//! Acceptance suite. Each criterion runs at its stated tolerance and
//! prints one `PASS`/`FAIL` line; the test fails if any criterion does.
//!
//! Criteria run sequentially inside a single test so that the stated
//! runtime budgets are measured on one core, undisturbed by test-harness
//! parallelism. Run with `--nocapture` to see the per-criterion lines.

use std::time::Instant;

use num_traits::Zero;

use screwpdm_core::analysis::{
    degeneracy_scan, find_crossings, sweep, sweep_parallel, DegeneracyClass, SweepAxis,
    SweepSpec,
};
use screwpdm_core::model::{SignConvention, SolvableFamily, SystemConfig};
use screwpdm_core::oracle::{
    audit, residual_norm, self_consistent_energy, OracleSettings, Verdict,
};
use screwpdm_core::specfun::{
    heun_coefficients, heun_coefficients_exact, heun_truncation_zeta, kummer_poly,
    laguerre, recurrence_residual_exact, ExactHeunParams, HeunParams,
};
use screwpdm_core::spectra::{self, Variant};
use screwpdm_core::Error;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn check(&mut self, id: &str, ok: bool, detail: String) {
        println!("{} criterion {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures.push(format!("criterion {id}: {detail}"));
        }
    }
}

fn case_a_config(chi: f64) -> SystemConfig {
    SystemConfig::free(1.0, -1.0, chi, 1.0).unwrap()
}

fn case_b_config(chi: f64) -> SystemConfig {
    SystemConfig::free(1.0, 2.0, chi, 1.0).unwrap()
}

fn case_c_config() -> SystemConfig {
    SystemConfig::free(1.0, -2.0, 0.0, 1.0)
        .unwrap()
        .with_potential(0.0, 8.0, 0.0)
        .unwrap()
}

fn case_d_config() -> SystemConfig {
    SystemConfig::free(1.0, -2.0, 0.0, 0.0)
        .unwrap()
        .with_gauge(1.0, 2.0, 0.0)
        .unwrap()
}

fn case_e_config(b_lin: f64) -> SystemConfig {
    case_d_config().with_potential(1.0, b_lin, 2.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn acceptance_criteria() {
    let suite_start = Instant::now();
    let mut gate = Gate::new();

    criterion_1_special_functions(&mut gate);
    criterion_2_case_a_agreement(&mut gate);
    criterion_3_case_b_sign_audit(&mut gate);
    criterion_4_case_c_audit(&mut gate);
    criterion_5_case_d_e_agreement(&mut gate);
    criterion_6_heun_recurrence(&mut gate);
    criterion_7_residual_checks(&mut gate);
    criterion_8_figure_properties(&mut gate);
    criterion_9_crossing_reproduction(&mut gate);
    criterion_10_determinism(&mut gate, suite_start);

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}

/// Laguerre–Kummer identity and `L_n^α(0)` closed form, rel < 1e-12, < 1 s.
fn criterion_1_special_functions(gate: &mut Gate) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 0..=6usize {
        for &alpha in &[0.0, 0.5, 1.0, 2.0] {
            for &x in &[0.1, 1.0, 3.0] {
                let ratio: f64 = (1..=n).map(|i| (alpha + i as f64) / i as f64).product();
                let lhs = kummer_poly(n, alpha + 1.0, x).unwrap();
                let rhs = laguerre(n, alpha, x).unwrap() / ratio;
                worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300));
            }
        }
    }
    let mut worst_zero: f64 = 0.0;
    for n in 0..=8usize {
        for &alpha in &[-0.5, 0.0, 0.5, 1.0, 2.0, 3.5] {
            let want: f64 = (1..=n).map(|i| (alpha + i as f64) / i as f64).product();
            let got = laguerre(n, alpha, 0.0).unwrap();
            worst_zero = worst_zero.max((got - want).abs() / want.abs().max(1e-300));
        }
    }
    let elapsed = start.elapsed();
    gate.check(
        "1",
        worst < 1e-12 && worst_zero < 1e-12 && elapsed.as_secs_f64() < 1.0,
        format!(
            "special functions: identity err {worst:.2e}, L_n(0) err {worst_zero:.2e}, {elapsed:?}"
        ),
    );
}

/// Closed form vs oracle for six states at χ ∈ {0, 0.5}, rel < 1e-4 at
/// n = 16000 nodes; includes 2.1180340 for (0, 1, χ = 0.5); < 10 s.
fn criterion_2_case_a_agreement(gate: &mut Gate) {
    let start = Instant::now();
    let settings = OracleSettings::default();
    let states = [(0usize, 1i64), (1, 1), (2, 1), (0, 2), (1, -1), (0, -2)];
    let mut worst: f64 = 0.0;
    let mut pinned = f64::NAN;
    let mut failures = Vec::new();
    for &chi in &[0.0, 0.5] {
        let cfg = case_a_config(chi);
        for &(n_r, ell) in &states {
            let closed = spectra::energy_case_a(&cfg, n_r, ell).unwrap().value;
            match self_consistent_energy(&cfg, n_r, ell, SignConvention::PrintedTarget, &settings)
            {
                Ok(oracle) => {
                    let gap = rel(oracle, closed);
                    worst = worst.max(gap);
                    if (n_r, ell) == (0, 1) && chi == 0.5 {
                        pinned = oracle;
                    }
                }
                Err(e) => failures.push(format!("({n_r},{ell},chi={chi}): {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    let pinned_ok = rel(pinned, 2.1180340) < 1e-4;
    gate.check(
        "2",
        failures.is_empty() && worst < 1e-4 && pinned_ok && elapsed.as_secs_f64() < 10.0,
        format!(
            "case A oracle agreement: worst rel {worst:.2e}, (0,1,chi=0.5) oracle {pinned:.7}, {elapsed:.2?}{}",
            if failures.is_empty() { String::new() } else { format!(", errors {failures:?}") }
        ),
    );
}

/// The printed `−k²` target admits no root; the positive target reproduces
/// the printed energy −0.1111111, rel < 1e-4.
fn criterion_3_case_b_sign_audit(gate: &mut Gate) {
    let settings = OracleSettings::default();
    let cfg = case_b_config(0.0);
    let printed =
        self_consistent_energy(&cfg, 0, 0, SignConvention::PrintedTarget, &settings);
    let no_root = matches!(printed, Err(Error::NoRoot(_)));
    let positive =
        self_consistent_energy(&cfg, 0, 0, SignConvention::PositiveTarget, &settings);
    let value_ok = positive
        .as_ref()
        .map(|&e| rel(e, -0.1111111) < 1e-4)
        .unwrap_or(false);
    gate.check(
        "3",
        no_root && value_ok,
        format!("case B sign audit: printed target -> {printed:?}, positive target -> {positive:?}"),
    );
}

/// The oracle confirms the re-derived −11.000 within 1e-3 and refutes the
/// printed −1.0; the audit verdict is `printed_deviates`.
fn criterion_4_case_c_audit(gate: &mut Gate) {
    let settings = OracleSettings::default();
    let cfg = case_c_config();
    let report = audit(SolvableFamily::CaseC, &cfg, 0, 1, &settings).unwrap();
    let oracle = report.oracle_value.unwrap_or(f64::NAN);
    let rederived_ok = rel(oracle, -11.000) < 1e-3;
    let printed = report.as_printed.unwrap_or(f64::NAN);
    // The printed value misses the oracle by about three orders of
    // magnitude more than the verdict tolerance.
    let printed_dev = (printed - oracle).abs() / oracle.abs().max(1.0);
    let printed_refuted = printed_dev > 500.0 * settings.verdict_rel_tol;
    let verdict_ok = report.verdict == Verdict::PrintedDeviates;
    gate.check(
        "4",
        rederived_ok && printed_refuted && verdict_ok,
        format!(
            "case C audit: oracle {oracle:.6}, rederived {:.6}, printed {printed:.6}, deviation {printed_dev:.3} ({}x tolerance), verdict {:?}",
            report.rederived.unwrap_or(f64::NAN),
            (printed_dev / settings.verdict_rel_tol) as i64,
            report.verdict
        ),
    );
}

/// Landau-type 3.25 and potential-shifted 5.25 match the oracle within
/// 1e-4; the spectrum is exactly independent of the linear coefficient.
fn criterion_5_case_d_e_agreement(gate: &mut Gate) {
    let settings = OracleSettings::default();
    let d = case_d_config();
    let oracle_d =
        self_consistent_energy(&d, 0, 2, SignConvention::PrintedTarget, &settings)
            .unwrap_or(f64::NAN);
    let d_ok = rel(oracle_d, 3.25) < 1e-4;

    let e = case_e_config(0.0);
    let oracle_e =
        self_consistent_energy(&e, 0, 2, SignConvention::PrintedTarget, &settings)
            .unwrap_or(f64::NAN);
    let e_ok = rel(oracle_e, 5.25) < 1e-4;

    let values: Vec<f64> = [0.0, 1.0, 5.0]
        .iter()
        .map(|&b| spectra::energy_case_e(&case_e_config(b), 0, 2).unwrap().value)
        .collect();
    let b_independent = values.iter().all(|&v| v == values[0]);

    gate.check(
        "5",
        d_ok && e_ok && b_independent,
        format!(
            "case D oracle {oracle_d:.8} (want 3.25), case E oracle {oracle_e:.8} (want 5.25), E(b_lin in {{0,1,5}}) = {values:?}"
        ),
    );
}

/// Exact-rational recurrence reconstruction through order 8; parity for
/// `b̃ = 0`; `C_{n+1} ≠ 0` whenever `b̃ ≠ 0` under `ζ = −2ωn`.
fn criterion_6_heun_recurrence(gate: &mut Gate) {
    let params = ExactHeunParams::from_ratios((2, 1), (2, 1), (1, 1), (-4, 1)).unwrap();
    let coeffs = heun_coefficients_exact(&params, 8);
    let exact_zero = (0..=6).all(|j| recurrence_residual_exact(&params, &coeffs, j).is_zero());

    let even = HeunParams::new(3.0, 0.0, 1.5, heun_truncation_zeta(4, 1.5)).unwrap();
    let even_poly = heun_coefficients(&even, 9).unwrap();
    let parity = even_poly.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0);

    let mut tail_survives = true;
    for &b_tilde in &[0.5, 1.0, 2.0, -1.5] {
        for n in [0usize, 2, 4] {
            let p =
                HeunParams::new(2.0, b_tilde, 1.0, heun_truncation_zeta(n, 1.0)).unwrap();
            let poly = heun_coefficients(&p, n + 1).unwrap();
            tail_survives &= poly.coeffs[n + 1].abs() > 1e-12;
        }
    }

    gate.check(
        "6",
        exact_zero && parity && tail_survives,
        format!(
            "Heun recurrence: exact residual zero {exact_zero}, parity {parity}, C_(n+1) nonzero for coulombic couplings {tail_survives}"
        ),
    );
}

/// Reduced-Hamiltonian residual sup-norm < 1e-6 for every closed-form pair
/// (case B under the positive target, case C re-derived, case E at b = 0);
/// a 1% energy perturbation exceeds 1e-3.
fn criterion_7_residual_checks(gate: &mut Gate) {
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    let mut run = |label: &str,
                   cfg: &SystemConfig,
                   n_r: usize,
                   ell: i64,
                   energy: f64,
                   convention: SignConvention|
     -> f64 {
        let value = residual_norm(cfg, n_r, ell, energy, convention).unwrap_or(f64::NAN);
        lines.push(format!("{label} {value:.2e}"));
        value
    };

    for (cfg, n_r, ell) in [
        (case_a_config(0.0), 0usize, 1i64),
        (case_a_config(0.5), 1, 1),
    ] {
        let e = spectra::energy_case_a(&cfg, n_r, ell).unwrap().value;
        worst = worst.max(run("A", &cfg, n_r, ell, e, SignConvention::PrintedTarget));
    }
    for (chi, n_r, ell) in [(0.0, 0usize, 0i64), (0.25, 1, 1)] {
        let cfg = case_b_config(chi);
        let e = spectra::energy_case_b(&cfg, n_r, ell).unwrap().value;
        worst = worst.max(run("B", &cfg, n_r, ell, e, SignConvention::PositiveTarget));
    }
    {
        let cfg = case_c_config();
        let e = spectra::energy_case_c(&cfg, 0, 1, Variant::Rederived).unwrap().value;
        worst = worst.max(run("C", &cfg, 0, 1, e, SignConvention::PrintedTarget));
    }
    for (n_r, ell) in [(0usize, 2i64), (1, 4)] {
        let cfg = case_d_config();
        let e = spectra::energy_case_d(&cfg, n_r, ell).unwrap().value;
        worst = worst.max(run("D", &cfg, n_r, ell, e, SignConvention::PrintedTarget));
    }
    for (n_r, ell) in [(0usize, 2i64), (1, 4)] {
        let cfg = case_e_config(0.0);
        let e = spectra::energy_case_e(&cfg, n_r, ell).unwrap().value;
        worst = worst.max(run("E", &cfg, n_r, ell, e, SignConvention::PrintedTarget));
    }

    let cfg = case_a_config(0.0);
    let exact = spectra::energy_case_a(&cfg, 0, 1).unwrap().value;
    let control =
        residual_norm(&cfg, 0, 1, exact * 1.01, SignConvention::PrintedTarget).unwrap();

    gate.check(
        "7",
        worst < 1e-6 && control > 1e-3,
        format!(
            "residuals: worst {worst:.2e} [{}], 1%-perturbed control {control:.2e}",
            lines.join(", ")
        ),
    );
}

/// Sweep-level figure properties: χ-sweep shape, negativity, reflection
/// degeneracy, and flux-induced degeneracy breaking.
fn criterion_8_figure_properties(gate: &mut Gate) {
    // Case A: minimal at χ = 0, increasing in |χ| for ℓ = 0.
    let spec = SweepSpec {
        axis: SweepAxis::Chi,
        start: -2.0,
        stop: 2.0,
        steps: 41,
        states: vec![(0, 0)],
        base: case_a_config(0.0),
    };
    let table = sweep(&spec).unwrap();
    let energies: Vec<f64> = table.rows.iter().map(|r| r.energy.unwrap()).collect();
    let mid = 20;
    let mut shape_ok = true;
    for i in mid..energies.len() - 1 {
        shape_ok &= energies[i + 1] > energies[i];
    }
    for i in 0..mid {
        shape_ok &= energies[i] > energies[i + 1];
    }
    shape_ok &= energies.iter().all(|&e| e >= energies[mid]);

    // Case B: every finite energy negative.
    let spec_b = SweepSpec {
        axis: SweepAxis::Chi,
        start: -2.0,
        stop: 2.0,
        steps: 21,
        states: vec![(0, 0), (1, 1), (0, -2)],
        base: case_b_config(0.0),
    };
    let all_negative = sweep(&spec_b)
        .unwrap()
        .rows
        .iter()
        .filter_map(|r| r.energy)
        .all(|e| e < 0.0);

    // Reflection degeneracy for the uncharged families, mirrored grids.
    let grid: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
    let mut reflection_ok = true;
    for base in [case_a_config(0.0), case_b_config(0.0), case_c_config()] {
        let classes = degeneracy_scan(&[(0, 1), (0, -1)], &base, &grid, 1e-12).unwrap();
        reflection_ok &= classes[0].class == DegeneracyClass::ReflectionDegenerate;
        reflection_ok &= classes[0].max_mirrored_diff.map(|d| d <= 1e-12).unwrap_or(false);
    }

    // Charged case with flux: the mirrored partner disappears or detunes.
    let charged = SystemConfig::free(1.0, -2.0, 0.0, 1.0)
        .unwrap()
        .with_gauge(1.0, 2.0, 0.5 * std::f64::consts::TAU)
        .unwrap();
    let small_grid: Vec<f64> = (0..11).map(|i| -0.5 + 0.1 * i as f64).collect();
    let broken = degeneracy_scan(&[(0, 3), (0, -3)], &charged, &small_grid, 1e-12)
        .unwrap()[0]
        .class
        != DegeneracyClass::ReflectionDegenerate;

    gate.check(
        "8",
        shape_ok && all_negative && reflection_ok && broken,
        format!(
            "figure properties: chi-sweep shape {shape_ok}, case B negative {all_negative}, reflection degeneracy {reflection_ok}, flux breaking {broken}"
        ),
    );
}

/// The documented level crossing of states (0,2) and (1,−1).
fn criterion_9_crossing_reproduction(gate: &mut Gate) {
    let found = find_crossings(
        &case_a_config(0.0),
        SweepAxis::Chi,
        (-1.0, 1.0),
        (0, 2),
        (1, -1),
        512,
    )
    .unwrap();
    let ok = found.len() == 1
        && (found[0].axis_value + 0.0077524).abs() < 1e-6
        && (found[0].energy - 5.0465140).abs() < 1e-5;
    let detail = found
        .first()
        .map(|c| format!("chi* = {:.7}, E* = {:.7}", c.axis_value, c.energy))
        .unwrap_or_else(|| "no crossing found".into());
    gate.check("9", ok, format!("crossing reproduction: {detail}"));
}

/// Bitwise-identical outputs across repeated runs and worker counts, and
/// the suite stays inside its time budget.
fn criterion_10_determinism(gate: &mut Gate, suite_start: Instant) {
    let spec = SweepSpec {
        axis: SweepAxis::Chi,
        start: -2.0,
        stop: 2.0,
        steps: 101,
        states: vec![(0, 0), (0, 2), (1, -1), (2, 1)],
        base: case_a_config(0.0),
    };
    let reference = sweep_parallel(&spec, 1).unwrap().to_csv();
    let deterministic = [1usize, 2, 4, 8]
        .iter()
        .all(|&w| sweep_parallel(&spec, w).unwrap().to_csv() == reference)
        && sweep_parallel(&spec, 3).unwrap().to_csv() == reference;

    let settings = OracleSettings::default().with_points(4000);
    let cfg = case_a_config(0.5);
    let once =
        self_consistent_energy(&cfg, 0, 1, SignConvention::PrintedTarget, &settings).unwrap();
    let twice =
        self_consistent_energy(&cfg, 0, 1, SignConvention::PrintedTarget, &settings).unwrap();
    let oracle_repeatable = once == twice;

    let elapsed = suite_start.elapsed();
    gate.check(
        "10",
        deterministic && oracle_repeatable && elapsed.as_secs_f64() < 60.0,
        format!(
            "determinism: sweeps identical across workers {deterministic}, oracle repeatable {oracle_repeatable}, acceptance elapsed {elapsed:.2?}"
        ),
    );
}
