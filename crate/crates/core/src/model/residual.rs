//! Pointwise residual of the full radial equation, evaluated on sampled
//! wavefunctions by centered finite differences.
//!
//! This is the numerical check of the whole derivation chain: the equation
//! applied here still carries the first-derivative drift `[1/r − f'/f] R'`
//! and the mass term `M(r)`, i.e. it is the radial equation *before* the
//! `R = √(f/r) U` transformation. An analytic eigenpair must drive it to
//! zero; a mismatched pair must not.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::config::SystemConfig;
use crate::model::problem::mass_term;

/// Which sign the constant axial target `∓k²` takes in the reduced equation.
///
/// The oscillator-like family (`σ = 2`) prints `−k²` but only `+k²` is
/// compatible with the positivity of its reduced operator; everywhere else
/// the two conventions coincide in practice because `PrintedTarget` is
/// already consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    PrintedTarget,
    PositiveTarget,
}

/// Residual and scale samples on the interior of a uniform grid.
#[derive(Debug, Clone)]
pub struct ResidualSamples {
    pub r: Vec<f64>,
    pub residual: Vec<f64>,
    /// Sum of the absolute values of the individual equation terms; the
    /// natural magnitude against which a residual is "small".
    pub scale: Vec<f64>,
}

impl ResidualSamples {
    /// `max |residual| / max scale` over nodes with `r ∈ [r_lo, r_hi]`.
    pub fn relative_sup_norm_within(&self, r_lo: f64, r_hi: f64) -> f64 {
        let mut max_res: f64 = 0.0;
        let mut max_scale: f64 = 0.0;
        for ((&r, &res), &sc) in self.r.iter().zip(&self.residual).zip(&self.scale) {
            if r < r_lo || r > r_hi {
                continue;
            }
            max_res = max_res.max(res.abs());
            max_scale = max_scale.max(sc);
        }
        if max_scale == 0.0 {
            return f64::NAN;
        }
        max_res / max_scale
    }

    /// Relative sup-norm over every retained node.
    pub fn relative_sup_norm(&self) -> f64 {
        self.relative_sup_norm_within(f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Evaluate the radial-equation residual on `R` sampled at the given nodes,
/// with the printed `−k²` target.
pub fn apply_reduced_hamiltonian(
    config: &SystemConfig,
    ell: i64,
    r: &[f64],
    samples: &[f64],
    energy: f64,
) -> Result<ResidualSamples> {
    apply_reduced_hamiltonian_with(config, ell, r, samples, energy, SignConvention::PrintedTarget)
}

/// Same as [`apply_reduced_hamiltonian`] with an explicit target convention.
pub fn apply_reduced_hamiltonian_with(
    config: &SystemConfig,
    ell: i64,
    r: &[f64],
    samples: &[f64],
    energy: f64,
    convention: SignConvention,
) -> Result<ResidualSamples> {
    if r.len() != samples.len() {
        return Err(Error::Grid(format!(
            "grid/sample length mismatch: {} vs {}",
            r.len(),
            samples.len()
        )));
    }
    let n = r.len();
    if n < 64 {
        return Err(Error::Grid(format!("residual grid too coarse: {n} < 64 points")));
    }
    if !(r[0] > 0.0) {
        return Err(Error::Grid("residual grid must lie in r > 0".into()));
    }
    let h = r[1] - r[0];
    if !(h > 0.0) {
        return Err(Error::Grid("residual grid must be increasing".into()));
    }
    for w in r.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::Grid("residual grid must be uniform".into()));
        }
    }

    let sigma = config.pdm.sigma;
    let lambda = config.pdm.lambda;
    let ell_eff = config.ell_eff(ell);
    let q_b0 = config.q_b0();
    let k_sq_signed = match convention {
        SignConvention::PrintedTarget => -config.k * config.k,
        SignConvention::PositiveTarget => config.k * config.k,
    };

    let mut out = ResidualSamples {
        r: Vec::with_capacity(n - 4),
        residual: Vec::with_capacity(n - 4),
        scale: Vec::with_capacity(n - 4),
    };

    // Fourth-order centered stencils keep the differentiation error well
    // below the 1e-6 relative budget on the default 4096-point grids.
    for i in 2..n - 2 {
        let ri = r[i];
        let d1 = (-samples[i + 2] + 8.0 * samples[i + 1] - 8.0 * samples[i - 1]
            + samples[i - 2])
            / (12.0 * h);
        let d2 = (-samples[i + 2] + 16.0 * samples[i + 1] - 30.0 * samples[i]
            + 16.0 * samples[i - 1]
            - samples[i - 2])
            / (12.0 * h * h);

        let t_second = d2;
        let t_drift = (1.0 - sigma) / ri * d1;
        let t_centrifugal = -(ell_eff * ell_eff) / (ri * ri) * samples[i];
        let t_mass = mass_term(&config.pdm, ri)? * samples[i];
        let t_landau = q_b0 * ell_eff * samples[i];
        let t_parabola = -(q_b0 * q_b0 * ri * ri / 4.0) * samples[i];
        let t_axial = k_sq_signed * samples[i];
        let t_energy =
            lambda * ri.powf(sigma) * (energy - config.potential_at(ri)) * samples[i];

        let residual = t_second
            + t_drift
            + t_centrifugal
            + t_mass
            + t_landau
            + t_parabola
            + t_axial
            + t_energy;
        let scale = t_second.abs()
            + t_drift.abs()
            + t_centrifugal.abs()
            + t_mass.abs()
            + t_landau.abs()
            + t_parabola.abs()
            + t_axial.abs()
            + t_energy.abs();

        out.r.push(ri);
        out.residual.push(residual);
        out.scale.push(scale);
    }
    Ok(out)
}
