//! Physical configuration of a PDM particle in a screw-dislocation medium.
//!
//! Units are fixed at `ħ = 2m₀ = 1` throughout.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Power-law mass multiplier `f(r) = λ r^σ`, so `M(r) = m₀ λ r^σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdmProfile {
    /// Dimensionless scale `λ > 0`.
    pub lambda: f64,
    /// Power-law exponent `σ`.
    pub sigma: f64,
}

impl PdmProfile {
    pub fn new(lambda: f64, sigma: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Config(format!("pdm lambda must be > 0, got {lambda}")));
        }
        if !sigma.is_finite() {
            return Err(Error::Config("pdm sigma must be finite".into()));
        }
        Ok(Self { lambda, sigma })
    }

    /// Constant-mass profile (`λ = 1`, `σ = 0`).
    pub fn constant_mass() -> Self {
        Self { lambda: 1.0, sigma: 0.0 }
    }
}

/// Screw-dislocation strength. `chi` has length units and relates to the
/// Burgers vector through `χ = b/(2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DislocationConfig {
    pub chi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burgers: Option<f64>,
}

impl DislocationConfig {
    pub fn from_chi(chi: f64) -> Self {
        Self { chi, burgers: None }
    }

    pub fn from_burgers(burgers: f64) -> Self {
        Self { chi: burgers / TAU, burgers: Some(burgers) }
    }

    /// Accepts both fields and enforces `chi = burgers/(2π)` to one ulp.
    pub fn new(chi: f64, burgers: Option<f64>) -> Result<Self> {
        if !chi.is_finite() {
            return Err(Error::Config("dislocation chi must be finite".into()));
        }
        if let Some(b) = burgers {
            let derived = b / TAU;
            if chi != derived && chi.next_up() != derived && chi.next_down() != derived {
                return Err(Error::Config(format!(
                    "inconsistent dislocation: chi = {chi} but burgers/(2*pi) = {derived}"
                )));
            }
        }
        Ok(Self { chi, burgers })
    }
}

/// Uniform magnetic field plus confined Aharonov–Bohm flux, entering through
/// the vector potential `A_φ = B₀ r/2 + Φ_AB/(2π r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeConfig {
    pub q: f64,
    pub b0: f64,
    pub phi_ab: f64,
}

impl GaugeConfig {
    pub fn new(q: f64, b0: f64, phi_ab: f64) -> Result<Self> {
        if !q.is_finite() || !b0.is_finite() || !phi_ab.is_finite() {
            return Err(Error::Config("gauge fields must be finite".into()));
        }
        Ok(Self { q, b0, phi_ab })
    }

    /// Cyclotron half-frequency `ω = qB₀/2`.
    pub fn omega(&self) -> f64 {
        self.q * self.b0 / 2.0
    }

    /// Angular-momentum shift `qΦ_AB/(2π)` produced by the flux line.
    pub fn ab_shift(&self) -> f64 {
        self.q * self.phi_ab / TAU
    }
}

/// Interaction potential `V(r) = a + b r + c r²`. The linear coefficient is
/// named `b_lin` to keep it apart from the Burgers vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialConfig {
    pub a: f64,
    pub b_lin: f64,
    pub c: f64,
}

impl PotentialConfig {
    pub fn new(a: f64, b_lin: f64, c: f64) -> Result<Self> {
        if !a.is_finite() || !b_lin.is_finite() || !c.is_finite() {
            return Err(Error::Config("potential coefficients must be finite".into()));
        }
        Ok(Self { a, b_lin, c })
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0.0 && self.b_lin == 0.0 && self.c == 0.0
    }
}

/// Full physical scenario in `ħ = 2m₀ = 1` units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub pdm: PdmProfile,
    pub dislocation: DislocationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    /// Axial wavenumber `k` of the `e^{ikz}` plane-wave factor.
    pub k: f64,
}

impl SystemConfig {
    pub fn new(
        pdm: PdmProfile,
        dislocation: DislocationConfig,
        gauge: Option<GaugeConfig>,
        potential: Option<PotentialConfig>,
        k: f64,
    ) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Config("axial wavenumber k must be finite".into()));
        }
        Ok(Self { pdm, dislocation, gauge, potential, k })
    }

    /// Uncharged, potential-free scenario.
    pub fn free(lambda: f64, sigma: f64, chi: f64, k: f64) -> Result<Self> {
        Self::new(
            PdmProfile::new(lambda, sigma)?,
            DislocationConfig::from_chi(chi),
            None,
            None,
            k,
        )
    }

    pub fn with_potential(mut self, a: f64, b_lin: f64, c: f64) -> Result<Self> {
        self.potential = Some(PotentialConfig::new(a, b_lin, c)?);
        Ok(self)
    }

    pub fn with_gauge(mut self, q: f64, b0: f64, phi_ab: f64) -> Result<Self> {
        self.gauge = Some(GaugeConfig::new(q, b0, phi_ab)?);
        Ok(self)
    }

    /// Whether the gauge sector actually couples: a present block with
    /// `qB₀ = 0` and `qΦ = 0` is physically identical to no block at all.
    pub fn gauge_active(&self) -> bool {
        self.gauge
            .map(|g| g.q * g.b0 != 0.0 || g.q * g.phi_ab != 0.0)
            .unwrap_or(false)
    }

    /// `ω = qB₀/2`, zero without a gauge block.
    pub fn omega(&self) -> f64 {
        self.gauge.map(|g| g.omega()).unwrap_or(0.0)
    }

    /// `qΦ_AB/(2π)`, zero without a gauge block.
    pub fn ab_shift(&self) -> f64 {
        self.gauge.map(|g| g.ab_shift()).unwrap_or(0.0)
    }

    /// `qB₀`, zero without a gauge block.
    pub fn q_b0(&self) -> f64 {
        self.gauge.map(|g| g.q * g.b0).unwrap_or(0.0)
    }

    /// Shifted angular quantum number `ℓ − χk − qΦ/(2π)`. Every derived
    /// coefficient depends on `(ℓ, χ, k, Φ)` only through this combination.
    pub fn ell_eff(&self, ell: i64) -> f64 {
        ell as f64 - self.dislocation.chi * self.k - self.ab_shift()
    }

    /// `V(r)`, zero without a potential block.
    pub fn potential_at(&self, r: f64) -> f64 {
        match &self.potential {
            Some(p) => p.a + p.b_lin * r + p.c * r * r,
            None => 0.0,
        }
    }

    /// Whether `V ≡ 0`, counting an all-zero block as absent.
    pub fn potential_is_zero(&self) -> bool {
        self.potential.map(|p| p.is_zero()).unwrap_or(true)
    }
}

/// Analytically solvable families of the reduced radial problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvableFamily {
    /// `σ = −1`, uncharged, free: Coulomb-like self-consistent problem.
    CaseA,
    /// `σ = 2`, uncharged, free: oscillator-like self-consistent problem.
    CaseB,
    /// `σ = −2`, uncharged, `V = a + br + cr²`: Coulomb-like with fixed target.
    CaseC,
    /// `σ = −2`, charged, free: Landau-type spectrum.
    CaseD,
    /// `σ = −2`, charged, `V = a + br + cr²`: biconfluent-Heun family.
    CaseE,
    /// No closed form claimed; only the numerical oracle applies.
    NumericalOnly,
}

impl std::fmt::Display for SolvableFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SolvableFamily::CaseA => "case_a",
            SolvableFamily::CaseB => "case_b",
            SolvableFamily::CaseC => "case_c",
            SolvableFamily::CaseD => "case_d",
            SolvableFamily::CaseE => "case_e",
            SolvableFamily::NumericalOnly => "numerical_only",
        };
        f.write_str(name)
    }
}

/// Sort a configuration into its solvable family.
///
/// The split is by values, not syntax: an all-zero potential block counts as
/// free, and a gauge block with `qB₀ = qΦ = 0` counts as uncharged.
pub fn classify(config: &SystemConfig) -> SolvableFamily {
    let gauge = config.gauge_active();
    let free = config.potential_is_zero();
    match config.pdm.sigma {
        s if s == -1.0 && !gauge && free => SolvableFamily::CaseA,
        s if s == 2.0 && !gauge && free => SolvableFamily::CaseB,
        s if s == -2.0 && !gauge && !free => SolvableFamily::CaseC,
        s if s == -2.0 && gauge && free => SolvableFamily::CaseD,
        s if s == -2.0 && gauge && !free => SolvableFamily::CaseE,
        _ => SolvableFamily::NumericalOnly,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let a = SystemConfig::free(1.0, -1.0, 0.3, 1.0).unwrap();
        assert_eq!(classify(&a), SolvableFamily::CaseA);

        let b = SystemConfig::free(1.0, 2.0, 0.0, 1.0).unwrap();
        assert_eq!(classify(&b), SolvableFamily::CaseB);

        let c = SystemConfig::free(1.0, -2.0, 0.0, 1.0)
            .unwrap()
            .with_potential(0.0, 8.0, 0.0)
            .unwrap();
        assert_eq!(classify(&c), SolvableFamily::CaseC);

        let d = SystemConfig::free(1.0, -2.0, 0.0, 0.0)
            .unwrap()
            .with_gauge(1.0, 2.0, 0.0)
            .unwrap();
        assert_eq!(classify(&d), SolvableFamily::CaseD);

        let e = d.clone().with_potential(1.0, 0.0, 2.0).unwrap();
        assert_eq!(classify(&e), SolvableFamily::CaseE);

        let odd = SystemConfig::free(1.0, 1.3, 0.0, 1.0).unwrap();
        assert_eq!(classify(&odd), SolvableFamily::NumericalOnly);
    }

    #[test]
    fn zero_valued_blocks_count_as_absent() {
        let a = SystemConfig::free(1.0, -1.0, 0.0, 1.0)
            .unwrap()
            .with_potential(0.0, 0.0, 0.0)
            .unwrap()
            .with_gauge(2.5, 0.0, 0.0)
            .unwrap();
        assert!(!a.gauge_active());
        assert_eq!(classify(&a), SolvableFamily::CaseA);
    }

    #[test]
    fn burgers_consistency() {
        let b = 2.0 * std::f64::consts::PI;
        assert!(DislocationConfig::new(1.0, Some(b)).is_ok());
        assert!(DislocationConfig::new(1.1, Some(b)).is_err());
        let d = DislocationConfig::from_burgers(b);
        assert!((d.chi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ell_eff_combines_all_shifts() {
        let cfg = SystemConfig::free(1.0, -2.0, 0.2, 1.0)
            .unwrap()
            .with_gauge(1.0, 2.0, std::f64::consts::PI)
            .unwrap();
        // ℓ − χk − qΦ/(2π) = 2 − 0.2 − 0.5
        assert!((cfg.ell_eff(2) - 1.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(PdmProfile::new(0.0, 1.0).is_err());
        assert!(PdmProfile::new(-1.0, 1.0).is_err());
        assert!(PdmProfile::new(1.0, f64::NAN).is_err());
        assert!(SystemConfig::free(1.0, -1.0, 0.0, f64::INFINITY).is_err());
    }
}
