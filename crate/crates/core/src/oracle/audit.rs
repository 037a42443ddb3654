//! Formula-versus-oracle audits.
//!
//! Each audit compares the family's printed closed form, its re-derived
//! variant (where one exists), and the self-consistent oracle value on two
//! grids, and issues a verdict at a fixed relative threshold. The charged
//! potential family additionally records the recurrence facts behind its
//! conditional exactness: the coefficient after the truncation degree does
//! not vanish for `b̃ ≠ 0`, and re-imposing `C_{n+1} = 0` as an extra
//! quantization forces either `b̃ = 0` or the impossible strength
//! `|L̃| = −1/2`, so that extra condition is redundant, not informative.

use serde::Serialize;

use crate::error::Result;
use crate::model::{
    case_parameters_for, SignConvention, SolvableFamily, SystemConfig,
};
use crate::oracle::selfconsistent::{self_consistent_energy, OracleSettings};
use crate::specfun::{heun_coefficients, HeunParams};
use crate::spectra::{self, Variant};

/// Outcome of one formula-versus-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Agrees,
    PrintedDeviates,
    NoBoundState,
}

/// Oracle values on the N-point and 2N-point grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RichardsonPair {
    pub coarse: f64,
    pub fine: f64,
}

/// Root existence under each axial-target convention (`σ = 2` family).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetSignAudit {
    pub printed_target_root: Option<f64>,
    pub positive_target_root: Option<f64>,
    pub verdict: Verdict,
}

/// Recurrence facts for the biconfluent-Heun family at truncation degree
/// `n = 2 n_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunAudit {
    pub truncation_degree: usize,
    /// `C_{n+1}` generated by the recurrence under `ζ = −2ωn`; nonzero for
    /// `b̃ ≠ 0`, which is why the truncation is only conditional.
    pub next_coefficient: f64,
    /// `C₂` from the recurrence (includes the `ζC₀` contribution).
    pub c2_recurrence: f64,
    /// The printed `C₂` closed form `b̃²/(2(2+2|L̃|)(1+2|L̃|))`, which omits
    /// the `ζC₀` contribution; kept in the audit path only.
    pub c2_printed: f64,
    /// `2ω(2|L̃|+1)`: the value `b̃²` would be forced to take if `C_{n+1}=0`
    /// were re-imposed at `n = 1`.
    pub reinforced_coupling_sq: f64,
    pub actual_coupling_sq: f64,
    /// The strength `|L̃|` that the re-imposed chain demands once `b̃ = 0`
    /// is also forced: `2|L̃| + 1 = 0`, i.e. `−1/2` — unacceptable both
    /// mathematically and physically.
    pub implied_strength_abs: f64,
}

/// Comparison record for one `(family, n_r, ℓ)` audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub case_id: String,
    pub n_r: usize,
    pub ell: i64,
    pub as_printed: Option<f64>,
    pub rederived: Option<f64>,
    pub oracle_value: Option<f64>,
    pub oracle_error: Option<f64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<RichardsonPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_sign: Option<TargetSignAudit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heun: Option<HeunAudit>,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit report serializes")
    }
}

/// Audit one closed-form family against the oracle.
pub fn audit(
    family: SolvableFamily,
    config: &SystemConfig,
    n_r: usize,
    ell: i64,
    settings: &OracleSettings,
) -> Result<AuditReport> {
    let (as_printed, rederived) = closed_forms(family, config, n_r, ell);

    let convention = match family {
        SolvableFamily::CaseB => SignConvention::PositiveTarget,
        _ => SignConvention::PrintedTarget,
    };
    let coarse_settings = settings.with_points(settings.n_points / 2);
    let coarse = self_consistent_energy(config, n_r, ell, convention, &coarse_settings).ok();
    let fine = self_consistent_energy(config, n_r, ell, convention, settings).ok();

    let (oracle_value, oracle_error, convergence) = match (coarse, fine) {
        (Some(c), Some(f)) => {
            (Some(f), Some((f - c).abs() / 3.0), Some(RichardsonPair { coarse: c, fine: f }))
        }
        (None, Some(f)) => (Some(f), None, None),
        _ => (None, None, None),
    };

    let verdict = match (as_printed, oracle_value) {
        (Some(printed), Some(oracle)) => {
            if relative_gap(printed, oracle) <= settings.verdict_rel_tol {
                Verdict::Agrees
            } else {
                Verdict::PrintedDeviates
            }
        }
        _ => Verdict::NoBoundState,
    };

    let target_sign = if family == SolvableFamily::CaseB {
        let printed_root =
            self_consistent_energy(config, n_r, ell, SignConvention::PrintedTarget, settings)
                .ok();
        let positive_root = fine;
        let sub_verdict = match (printed_root, positive_root) {
            (None, Some(_)) => Verdict::PrintedDeviates,
            (Some(_), Some(_)) => Verdict::Agrees,
            _ => Verdict::NoBoundState,
        };
        Some(TargetSignAudit {
            printed_target_root: printed_root,
            positive_target_root: positive_root,
            verdict: sub_verdict,
        })
    } else {
        None
    };

    let heun = if family == SolvableFamily::CaseE {
        rederived.and_then(|energy| heun_facts(config, n_r, ell, energy).ok())
    } else {
        None
    };

    Ok(AuditReport {
        case_id: family.to_string(),
        n_r,
        ell,
        as_printed,
        rederived,
        oracle_value,
        oracle_error,
        verdict,
        convergence,
        target_sign,
        heun,
    })
}

fn closed_forms(
    family: SolvableFamily,
    config: &SystemConfig,
    n_r: usize,
    ell: i64,
) -> (Option<f64>, Option<f64>) {
    match family {
        SolvableFamily::CaseA => {
            let v = spectra::energy_case_a(config, n_r, ell).ok().map(|r| r.value);
            (v, v)
        }
        SolvableFamily::CaseB => {
            let v = spectra::energy_case_b(config, n_r, ell).ok().map(|r| r.value);
            (v, v)
        }
        SolvableFamily::CaseC => (
            spectra::energy_case_c(config, n_r, ell, Variant::AsPrinted)
                .ok()
                .map(|r| r.value),
            spectra::energy_case_c(config, n_r, ell, Variant::Rederived)
                .ok()
                .map(|r| r.value),
        ),
        SolvableFamily::CaseD => {
            let v = spectra::energy_case_d(config, n_r, ell).ok().map(|r| r.value);
            (v, v)
        }
        SolvableFamily::CaseE => {
            let v = spectra::energy_case_e(config, n_r, ell).ok().map(|r| r.value);
            (v, v)
        }
        SolvableFamily::NumericalOnly => (None, None),
    }
}

fn heun_facts(config: &SystemConfig, n_r: usize, ell: i64, energy: f64) -> Result<HeunAudit> {
    let params = case_parameters_for(config, SolvableFamily::CaseE, ell, energy)?;
    let l_abs = params.angular_strength_sq.max(0.0).sqrt();
    let omega = params.omega;
    let b_tilde = params.b_tilde;
    let n = 2 * n_r;

    let heun_params = HeunParams::truncated(2.0 * l_abs, b_tilde, omega, n)?;
    let order = (n + 1).max(2);
    let series = heun_coefficients(&heun_params, order)?;

    Ok(HeunAudit {
        truncation_degree: n,
        next_coefficient: series.coeffs[n + 1],
        c2_recurrence: series.coeffs[2],
        c2_printed: b_tilde * b_tilde
            / (2.0 * (2.0 + 2.0 * l_abs) * (1.0 + 2.0 * l_abs)),
        reinforced_coupling_sq: 2.0 * omega * (2.0 * l_abs + 1.0),
        actual_coupling_sq: b_tilde * b_tilde,
        implied_strength_abs: -0.5,
    })
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
