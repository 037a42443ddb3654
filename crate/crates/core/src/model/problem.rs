//! Reduction of the full radial equation to the one-dimensional form
//! `−U'' + W(r) U = τ U` and the per-family derived parameters.
//!
//! Because the energy multiplies `λ r^σ` inside the reduced equation, the
//! coefficients of `W` are affine functions of the unknown `E`; solvers must
//! treat the spectral problem as self-consistent whenever `E` survives
//! inside `W`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::config::{classify, SolvableFamily, SystemConfig};
use crate::model::PdmProfile;

/// Mass multiplier `f(r) = λ r^σ`.
pub fn mass_multiplier(pdm: &PdmProfile, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("mass_multiplier needs r > 0, got {r}")));
    }
    Ok(pdm.lambda * r.powf(pdm.sigma))
}

/// Mass-induced term of the reduced Schrödinger equation,
/// `M(r) = (7/16)(f'/f)² − (1/4)(f''/f + f'/(r f))`.
///
/// For the power law this collapses to `(3σ²/16)/r²`.
pub fn mass_term(pdm: &PdmProfile, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("mass_term needs r > 0, got {r}")));
    }
    let sigma = pdm.sigma;
    let log_deriv = sigma / r; // f'/f
    let second_ratio = sigma * (sigma - 1.0) / (r * r); // f''/f
    Ok(7.0 / 16.0 * log_deriv * log_deriv - 0.25 * (second_ratio + log_deriv / r))
}

/// A quantity of the form `constant + energy_slope · E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineEnergy {
    pub constant: f64,
    pub energy_slope: f64,
}

impl AffineEnergy {
    pub const fn constant(value: f64) -> Self {
        Self { constant: value, energy_slope: 0.0 }
    }

    pub fn at(&self, energy: f64) -> f64 {
        self.constant + self.energy_slope * energy
    }

    pub fn depends_on_energy(&self) -> bool {
        self.energy_slope != 0.0
    }
}

/// One `coefficient · r^exponent` contribution to `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerTerm {
    pub coefficient: AffineEnergy,
    pub exponent: f64,
}

/// The reduced one-dimensional operator `−d²/dr² + W(r)` with
/// `W = (s − 1/4)/r² + Σ cᵢ r^{pᵢ}` and fixed target eigenvalue `τ`.
///
/// `s` houses whichever squared effective angular strength the family
/// demands; `r^{−2}` contributions are folded into `s` and `r^0`
/// contributions into `τ`, so the remaining power terms carry genuine
/// radial shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveRadialProblem {
    pub centrifugal: AffineEnergy,
    pub power_terms: Vec<PowerTerm>,
    pub target: AffineEnergy,
    /// Whether `E` appears inside `W` (rather than only in `τ`).
    pub energy_embedding: bool,
}

impl EffectiveRadialProblem {
    /// `W(r)` at a probe energy.
    pub fn potential_at(&self, r: f64, energy: f64) -> f64 {
        (self.centrifugal.at(energy) - 0.25) / (r * r) + self.regular_part_at(r, energy)
    }

    /// `W(r)` without the centrifugal slot: the power terms alone.
    pub fn regular_part_at(&self, r: f64, energy: f64) -> f64 {
        let mut w = 0.0;
        for term in &self.power_terms {
            w += term.coefficient.at(energy) * r.powf(term.exponent);
        }
        w
    }

    pub fn target_at(&self, energy: f64) -> f64 {
        self.target.at(energy)
    }
}

/// Build the reduced problem for one angular channel.
pub fn build_effective_problem(
    config: &SystemConfig,
    ell: i64,
) -> Result<EffectiveRadialProblem> {
    if !(config.pdm.lambda > 0.0) {
        return Err(Error::Config("pdm lambda must be > 0".into()));
    }
    let sigma = config.pdm.sigma;
    let lambda = config.pdm.lambda;
    let ell_eff = config.ell_eff(ell);

    let mut centrifugal = AffineEnergy::constant(ell_eff * ell_eff + sigma * sigma / 16.0);
    let mut target = AffineEnergy::constant(-config.k * config.k);
    let mut power_terms = Vec::new();

    if config.gauge_active() {
        let omega = config.omega();
        // Landau shift lands in the target; the magnetic parabola in W.
        target.constant += config.q_b0() * ell_eff;
        power_terms.push(PowerTerm {
            coefficient: AffineEnergy::constant(omega * omega),
            exponent: 2.0,
        });
    }

    // −λ r^σ (E − V) = (λa − λE) r^σ + λb r^{σ+1} + λc r^{σ+2}
    let (a, b_lin, c) = match &config.potential {
        Some(p) => (p.a, p.b_lin, p.c),
        None => (0.0, 0.0, 0.0),
    };
    let pieces = [
        (AffineEnergy { constant: lambda * a, energy_slope: -lambda }, sigma),
        (AffineEnergy::constant(lambda * b_lin), sigma + 1.0),
        (AffineEnergy::constant(lambda * c), sigma + 2.0),
    ];
    for (coefficient, exponent) in pieces {
        if coefficient.constant == 0.0 && coefficient.energy_slope == 0.0 {
            continue;
        }
        if exponent == -2.0 {
            centrifugal.constant += coefficient.constant;
            centrifugal.energy_slope += coefficient.energy_slope;
        } else if exponent == 0.0 {
            target.constant -= coefficient.constant;
            target.energy_slope -= coefficient.energy_slope;
        } else {
            power_terms.push(PowerTerm { coefficient, exponent });
        }
    }

    let energy_embedding = centrifugal.depends_on_energy()
        || power_terms.iter().any(|t| t.coefficient.depends_on_energy());

    Ok(EffectiveRadialProblem { centrifugal, power_terms, target, energy_embedding })
}

/// Per-family derived symbols. `angular_strength_sq` holds the squared
/// effective angular strength occupying the centrifugal slot of the
/// family's reduced equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseParameters {
    pub family: SolvableFamily,
    /// `ℓ − χk − qΦ/(2π)`.
    pub ell_eff: f64,
    pub angular_strength_sq: f64,
    /// `λa`.
    pub a_tilde: f64,
    /// `λb`.
    pub b_tilde: f64,
    /// `qB₀/2`.
    pub omega: f64,
    /// `√(λc + k²)`, where the family decays exponentially.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// `qB₀ ℓ_eff − k²`, the gauge-family target.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_tilde: Option<f64>,
    /// `λ̃ − λc`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capital_lambda_tilde: Option<f64>,
    /// `2ω(|L̃| + 1) − Λ̃`, the series-truncation parameter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
}

/// Derived symbols for the configuration's own family.
pub fn case_parameters(config: &SystemConfig, ell: i64, energy: f64) -> Result<CaseParameters> {
    let family = classify(config);
    if family == SolvableFamily::NumericalOnly {
        return Err(Error::Config(
            "case_parameters requires an analytically solvable family".into(),
        ));
    }
    case_parameters_for(config, family, ell, energy)
}

/// Derived symbols for a chosen family view of the configuration. The view
/// must be structurally compatible (`σ`, gauge activity); the potential may
/// be absent, in which case its coefficients read as zero.
pub fn case_parameters_for(
    config: &SystemConfig,
    family: SolvableFamily,
    ell: i64,
    energy: f64,
) -> Result<CaseParameters> {
    check_structure(config, family)?;
    let lambda = config.pdm.lambda;
    let k = config.k;
    let ell_eff = config.ell_eff(ell);
    let (a, b_lin, c) = match &config.potential {
        Some(p) => (p.a, p.b_lin, p.c),
        None => (0.0, 0.0, 0.0),
    };
    let a_tilde = lambda * a;
    let b_tilde = lambda * b_lin;
    let omega = config.omega();

    let mut params = CaseParameters {
        family,
        ell_eff,
        angular_strength_sq: f64::NAN,
        a_tilde,
        b_tilde,
        omega,
        kappa: None,
        lambda_tilde: None,
        capital_lambda_tilde: None,
        zeta: None,
    };

    match family {
        SolvableFamily::CaseA => {
            params.angular_strength_sq = ell_eff * ell_eff + 1.0 / 16.0;
        }
        SolvableFamily::CaseB => {
            params.angular_strength_sq = ell_eff * ell_eff + 0.25;
        }
        SolvableFamily::CaseC => {
            params.angular_strength_sq = ell_eff * ell_eff - lambda * (energy - a) + 0.25;
            let kappa_sq = lambda * c + k * k;
            if kappa_sq < 0.0 {
                return Err(Error::Domain(format!(
                    "lambda*c + k^2 = {kappa_sq} < 0: no exponential decay scale"
                )));
            }
            params.kappa = Some(kappa_sq.sqrt());
        }
        SolvableFamily::CaseD => {
            params.angular_strength_sq = ell_eff * ell_eff - lambda * energy + 0.25;
            let lambda_tilde = config.q_b0() * ell_eff - k * k;
            params.lambda_tilde = Some(lambda_tilde);
        }
        SolvableFamily::CaseE => {
            let m_tilde_sq = ell_eff * ell_eff - lambda * energy + 0.25;
            params.angular_strength_sq = m_tilde_sq + a_tilde;
            let lambda_tilde = config.q_b0() * ell_eff - k * k;
            let capital = lambda_tilde - lambda * c;
            params.lambda_tilde = Some(lambda_tilde);
            params.capital_lambda_tilde = Some(capital);
            if params.angular_strength_sq >= 0.0 {
                let l_abs = params.angular_strength_sq.sqrt();
                params.zeta = Some(2.0 * omega * (l_abs + 1.0) - capital);
            }
        }
        SolvableFamily::NumericalOnly => unreachable!(),
    }
    Ok(params)
}

fn check_structure(config: &SystemConfig, family: SolvableFamily) -> Result<()> {
    let sigma = config.pdm.sigma;
    let gauge = config.gauge_active();
    let ok = match family {
        SolvableFamily::CaseA => sigma == -1.0 && !gauge,
        SolvableFamily::CaseB => sigma == 2.0 && !gauge,
        SolvableFamily::CaseC => sigma == -2.0 && !gauge,
        SolvableFamily::CaseD | SolvableFamily::CaseE => sigma == -2.0 && gauge,
        SolvableFamily::NumericalOnly => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "configuration (sigma = {sigma}, gauge_active = {gauge}) is not a {family} structure"
        )))
    }
}
