//! `screwpdm`: spectra, wavefunctions, oracle verification, parameter
//! sweeps, level crossings and formula audits for position-dependent-mass
//! particles in a screw-dislocation medium.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 no bound state for
//! the requested quantum numbers, 4 oracle non-convergence.

mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{CliConfigFile, Overrides};
use screwpdm_core::analysis::{
    find_crossings, sweep_parallel, CrossingPoint, SpectrumTable, SweepAxis, SweepSpec,
};
use screwpdm_core::error::{Error, Result};
use screwpdm_core::model::{classify, SignConvention, SolvableFamily, SystemConfig};
use screwpdm_core::oracle::{audit, residual_norm, self_consistent_energy, AuditReport};
use screwpdm_core::spectra::{self, EnergyResult, Variant};

#[derive(Parser)]
#[command(
    name = "screwpdm",
    version,
    about = "Energy spectra and radial wavefunctions of power-law position-dependent-mass particles in a medium with a screw dislocation, with magnetic and Aharonov-Bohm flux fields"
)]
struct Cli {
    /// TOML configuration file (see configs/ for examples)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the artifact to this path (atomic replace) instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override [pdm] lambda
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Override [pdm] sigma
    #[arg(long, global = true, allow_hyphen_values = true)]
    sigma: Option<f64>,
    /// Override [dislocation] chi
    #[arg(long, global = true, allow_hyphen_values = true)]
    chi: Option<f64>,
    /// Override [dislocation] burgers
    #[arg(long, global = true, allow_hyphen_values = true)]
    burgers: Option<f64>,
    /// Override [particle] k
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Override [gauge] q
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<f64>,
    /// Override [gauge] b0
    #[arg(long, global = true, allow_hyphen_values = true)]
    b0: Option<f64>,
    /// Override [gauge] phi_ab
    #[arg(long = "phi-ab", global = true, allow_hyphen_values = true)]
    phi_ab: Option<f64>,
    /// Override [potential] a
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Override [potential] b_lin
    #[arg(long = "b-lin", global = true, allow_hyphen_values = true)]
    b_lin: Option<f64>,
    /// Override [potential] c
    #[arg(long, global = true, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Override [oracle] n_points
    #[arg(long = "n-points", global = true)]
    n_points: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Printed,
    Rederived,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    /// The target sign as printed in the closed forms
    Printed,
    /// The spectrally consistent positive axial target (σ = 2 family)
    Positive,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form energy of one (n_r, ell) state as JSON
    Spectrum {
        #[arg(long)]
        nr: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        /// Formula variant for the sigma = -2 potential family
        #[arg(long, value_enum, default_value_t = VariantArg::Rederived)]
        variant: VariantArg,
    },
    /// Sampled radial wavefunction (columns r, R, U) as CSV
    Wavefunction {
        #[arg(long)]
        nr: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        /// Number of radial samples
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Closed form vs self-consistent oracle vs equation residual as JSON
    Verify {
        #[arg(long)]
        nr: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[arg(long, value_enum, default_value_t = TargetArg::Printed)]
        target: TargetArg,
    },
    /// Energy table over a swept parameter as CSV (or JSON)
    Sweep {
        /// Swept parameter: chi, b0, b_lin, c, phi_ab
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        start: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        stop: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// State to track, as "n_r,ell" (repeatable)
        #[arg(long = "state", allow_hyphen_values = true)]
        states: Vec<String>,
        /// Worker threads; the output is identical for any count
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Level crossings of two states along an axis as JSON
    Crossings {
        /// First state as "n_r,ell"
        #[arg(long = "state-a", allow_hyphen_values = true)]
        state_a: String,
        /// Second state as "n_r,ell"
        #[arg(long = "state-b", allow_hyphen_values = true)]
        state_b: String,
        #[arg(long, default_value = "chi")]
        axis: String,
        #[arg(long, allow_hyphen_values = true)]
        start: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        stop: Option<f64>,
        /// Scan density before bisection refinement
        #[arg(long = "scan-points", default_value_t = 512)]
        scan_points: usize,
    },
    /// Formula-versus-oracle audit report as JSON
    Audit {
        /// Family to audit: a, b, c, d or e (default: the config's own)
        #[arg(long)]
        case: Option<String>,
        #[arg(long, default_value_t = 0)]
        nr: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        ell: i64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Grid(_) => 2,
        Error::InvalidState(_) | Error::NoRoot(_) => 3,
        Error::Convergence(_) => 4,
    }
}

fn run(cli: Cli) -> Result<()> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config <file> is required".into()))?;
    let mut resolved = CliConfigFile::load(path)?;
    resolved.apply(&Overrides {
        lambda: cli.lambda,
        sigma: cli.sigma,
        chi: cli.chi,
        burgers: cli.burgers,
        k: cli.k,
        q: cli.q,
        b0: cli.b0,
        phi_ab: cli.phi_ab,
        a: cli.a,
        b_lin: cli.b_lin,
        c: cli.c,
        n_points: cli.n_points,
    });
    let system = resolved.to_system()?;
    let settings = resolved.oracle_settings();

    let artifact = match &cli.command {
        Command::Spectrum { nr, ell, variant } => {
            spectrum_artifact(&resolved, &system, *nr, *ell, *variant)?
        }
        Command::Wavefunction { nr, ell, samples } => {
            wavefunction_artifact(&resolved, &system, *nr, *ell, *samples)?
        }
        Command::Verify { nr, ell, target } => {
            verify_artifact(&resolved, &system, &settings, *nr, *ell, *target)?
        }
        Command::Sweep { axis, start, stop, steps, states, workers, format } => {
            sweep_artifact(
                &resolved, &system, axis, *start, *stop, *steps, states, *workers, *format,
            )?
        }
        Command::Crossings { state_a, state_b, axis, start, stop, scan_points } => {
            crossings_artifact(
                &resolved, &system, state_a, state_b, axis, *start, *stop, *scan_points,
            )?
        }
        Command::Audit { case, nr, ell } => {
            audit_artifact(&resolved, &system, &settings, case.as_deref(), *nr, *ell)?
        }
    };

    output::emit(cli.out.as_deref(), &artifact)
}

#[derive(Serialize)]
struct SpectrumArtifact<'a> {
    command: &'static str,
    config: &'a CliConfigFile,
    result: EnergyResult,
}

fn spectrum_artifact(
    resolved: &CliConfigFile,
    system: &SystemConfig,
    n_r: usize,
    ell: i64,
    variant: VariantArg,
) -> Result<String> {
    let result = match (classify(system), variant) {
        (SolvableFamily::CaseC, VariantArg::Printed) => {
            spectra::energy_case_c(system, n_r, ell, Variant::AsPrinted)?
        }
        (SolvableFamily::CaseC, VariantArg::Rederived) => {
            spectra::energy_case_c(system, n_r, ell, Variant::Rederived)?
        }
        _ => spectra::energy(system, n_r, ell)?,
    };
    to_json(&SpectrumArtifact { command: "spectrum", config: resolved, result })
}

fn wavefunction_artifact(
    resolved: &CliConfigFile,
    system: &SystemConfig,
    n_r: usize,
    ell: i64,
    samples: usize,
) -> Result<String> {
    if samples < 2 {
        return Err(Error::Config("wavefunction needs at least 2 samples".into()));
    }
    let wf = spectra::wavefunction(system, n_r, ell)?;
    let mut body = String::from("r,R,U\n");
    for r in wf.sample_grid(samples) {
        body.push_str(&format!(
            "{},{},{}\n",
            screwpdm_core::analysis::format_float(r),
            screwpdm_core::analysis::format_float(wf.r_wave(r)),
            screwpdm_core::analysis::format_float(wf.u(r)),
        ));
    }
    Ok(output::csv_with_config(&resolved.to_toml(), &body))
}

#[derive(Serialize)]
struct VerifyArtifact<'a> {
    command: &'static str,
    config: &'a CliConfigFile,
    n_r: usize,
    ell: i64,
    target: &'static str,
    closed_form: EnergyResult,
    oracle_energy: f64,
    relative_gap: f64,
    residual_sup_norm: f64,
}

fn verify_artifact(
    resolved: &CliConfigFile,
    system: &SystemConfig,
    settings: &screwpdm_core::oracle::OracleSettings,
    n_r: usize,
    ell: i64,
    target: TargetArg,
) -> Result<String> {
    let convention = match target {
        TargetArg::Printed => SignConvention::PrintedTarget,
        TargetArg::Positive => SignConvention::PositiveTarget,
    };
    let closed_form = spectra::energy(system, n_r, ell)?;
    let oracle_energy = self_consistent_energy(system, n_r, ell, convention, settings)?;
    let residual = residual_norm(system, n_r, ell, closed_form.value, convention)?;
    to_json(&VerifyArtifact {
        command: "verify",
        config: resolved,
        n_r,
        ell,
        target: match target {
            TargetArg::Printed => "printed",
            TargetArg::Positive => "positive",
        },
        closed_form,
        oracle_energy,
        relative_gap: (oracle_energy - closed_form.value).abs()
            / closed_form.value.abs().max(1e-300),
        residual_sup_norm: residual,
    })
}

#[derive(Serialize)]
struct SweepArtifact<'a> {
    command: &'static str,
    config: &'a CliConfigFile,
    table: SpectrumTable,
}

#[allow(clippy::too_many_arguments)]
fn sweep_artifact(
    resolved: &CliConfigFile,
    system: &SystemConfig,
    axis: &Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    steps: Option<usize>,
    states: &[String],
    workers: usize,
    format: FormatArg,
) -> Result<String> {
    let section = resolved.sweep.as_ref();
    let axis_name = axis
        .clone()
        .or_else(|| section.map(|s| s.axis.clone()))
        .ok_or_else(|| Error::Config("sweep needs an axis (flag or [sweep] section)".into()))?;
    let axis: SweepAxis = axis_name.parse()?;
    let (default_start, default_stop) = axis.default_range();
    let spec = SweepSpec {
        axis,
        start: start.or(section.map(|s| s.start)).unwrap_or(default_start),
        stop: stop.or(section.map(|s| s.stop)).unwrap_or(default_stop),
        steps: steps.or(section.map(|s| s.steps)).unwrap_or(101),
        states: if states.is_empty() {
            section
                .map(|s| s.states.clone())
                .ok_or_else(|| Error::Config("sweep needs at least one --state n_r,ell".into()))?
        } else {
            states.iter().map(|s| parse_state(s)).collect::<Result<Vec<_>>>()?
        },
        base: system.clone(),
    };
    let table = sweep_parallel(&spec, workers)?;
    match format {
        FormatArg::Csv => Ok(output::csv_with_config(&resolved.to_toml(), &table.to_csv())),
        FormatArg::Json => to_json(&SweepArtifact { command: "sweep", config: resolved, table }),
    }
}

#[derive(Serialize)]
struct CrossingsArtifact<'a> {
    command: &'static str,
    config: &'a CliConfigFile,
    axis: &'a str,
    start: f64,
    stop: f64,
    state_a: (usize, i64),
    state_b: (usize, i64),
    crossings: Vec<CrossingPoint>,
}

#[allow(clippy::too_many_arguments)]
fn crossings_artifact(
    resolved: &CliConfigFile,
    system: &SystemConfig,
    state_a: &str,
    state_b: &str,
    axis: &str,
    start: Option<f64>,
    stop: Option<f64>,
    scan_points: usize,
) -> Result<String> {
    let axis_parsed: SweepAxis = axis.parse()?;
    let (default_start, default_stop) = axis_parsed.default_range();
    let a = parse_state(state_a)?;
    let b = parse_state(state_b)?;
    let range = (start.unwrap_or(default_start), stop.unwrap_or(default_stop));
    let crossings = find_crossings(system, axis_parsed, range, a, b, scan_points)?;
    to_json(&CrossingsArtifact {
        command: "crossings",
        config: resolved,
        axis,
        start: range.0,
        stop: range.1,
        state_a: a,
        state_b: b,
        crossings,
    })
}

#[derive(Serialize)]
struct AuditArtifact<'a> {
    command: &'static str,
    config: &'a CliConfigFile,
    report: AuditReport,
}

fn audit_artifact(
    resolved: &CliConfigFile,
    system: &SystemConfig,
    settings: &screwpdm_core::oracle::OracleSettings,
    case: Option<&str>,
    n_r: usize,
    ell: i64,
) -> Result<String> {
    let family = match case {
        Some(name) => parse_family(name)?,
        None => classify(system),
    };
    if family == SolvableFamily::NumericalOnly {
        return Err(Error::Config(
            "configuration has no closed-form family to audit".into(),
        ));
    }
    if classify(system) != family {
        return Err(Error::Config(format!(
            "configuration classifies as {}, not {family}",
            classify(system)
        )));
    }
    let report = audit(family, system, n_r, ell, settings)?;
    to_json(&AuditArtifact { command: "audit", config: resolved, report })
}

fn parse_state(text: &str) -> Result<(usize, i64)> {
    let mut parts = text.split(',');
    let (Some(nr), Some(ell), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Config(format!("state '{text}' is not of the form n_r,ell")));
    };
    let nr = nr
        .trim()
        .parse::<usize>()
        .map_err(|e| Error::Config(format!("bad n_r in '{text}': {e}")))?;
    let ell = ell
        .trim()
        .parse::<i64>()
        .map_err(|e| Error::Config(format!("bad ell in '{text}': {e}")))?;
    Ok((nr, ell))
}

fn parse_family(name: &str) -> Result<SolvableFamily> {
    match name.to_ascii_lowercase().as_str() {
        "a" | "case_a" => Ok(SolvableFamily::CaseA),
        "b" | "case_b" => Ok(SolvableFamily::CaseB),
        "c" | "case_c" => Ok(SolvableFamily::CaseC),
        "d" | "case_d" => Ok(SolvableFamily::CaseD),
        "e" | "case_e" => Ok(SolvableFamily::CaseE),
        other => Err(Error::Config(format!("unknown case '{other}' (expected a..e)"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Config(format!("serialization failure: {e}")))
}
