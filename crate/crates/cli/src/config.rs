//! The configuration file: plain TOML with one section per physical
//! ingredient. Unknown keys are rejected; a missing optional section means
//! the feature is absent. Command-line flags override file values, and the
//! resolved configuration is echoed into every artifact so a run can be
//! reproduced from its own output.

use serde::{Deserialize, Serialize};

use screwpdm_core::error::{Error, Result};
use screwpdm_core::model::{
    DislocationConfig, GaugeConfig, PdmProfile, PotentialConfig, SystemConfig,
};
use screwpdm_core::oracle::OracleSettings;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfigFile {
    pub pdm: PdmSection,
    pub dislocation: DislocationSection,
    pub particle: ParticleSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdmSection {
    pub lambda: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DislocationSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burgers: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSection {
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSection {
    pub q: f64,
    pub b0: f64,
    #[serde(default)]
    pub phi_ab: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b_lin: f64,
    #[serde(default)]
    pub c: f64,
}

/// Oracle knobs; anything omitted falls back to the built-in defaults
/// (16000 nodes, 64-point scan, ±20% bracket, `|F| ≤ 1e-10`, verdicts at
/// 1e-3, box radius 30/rate for exponential and 8/√coef for Gaussian
/// tails).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict_rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_tail_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss_tail_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub states: Vec<(usize, i64)>,
}

/// Flag-level overrides of file values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub sigma: Option<f64>,
    pub chi: Option<f64>,
    pub burgers: Option<f64>,
    pub k: Option<f64>,
    pub q: Option<f64>,
    pub b0: Option<f64>,
    pub phi_ab: Option<f64>,
    pub a: Option<f64>,
    pub b_lin: Option<f64>,
    pub c: Option<f64>,
    pub n_points: Option<usize>,
}

impl CliConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Apply flag overrides, creating optional sections when a flag
    /// addresses one that the file omitted.
    pub fn apply(&mut self, over: &Overrides) {
        if let Some(v) = over.lambda {
            self.pdm.lambda = v;
        }
        if let Some(v) = over.sigma {
            self.pdm.sigma = v;
        }
        if let Some(v) = over.chi {
            self.dislocation.chi = Some(v);
            self.dislocation.burgers = None;
        }
        if let Some(v) = over.burgers {
            self.dislocation.burgers = Some(v);
            self.dislocation.chi = None;
        }
        if let Some(v) = over.k {
            self.particle.k = v;
        }
        if over.q.is_some() || over.b0.is_some() || over.phi_ab.is_some() {
            let gauge = self.gauge.get_or_insert(GaugeSection { q: 0.0, b0: 0.0, phi_ab: 0.0 });
            if let Some(v) = over.q {
                gauge.q = v;
            }
            if let Some(v) = over.b0 {
                gauge.b0 = v;
            }
            if let Some(v) = over.phi_ab {
                gauge.phi_ab = v;
            }
        }
        if over.a.is_some() || over.b_lin.is_some() || over.c.is_some() {
            let pot =
                self.potential.get_or_insert(PotentialSection { a: 0.0, b_lin: 0.0, c: 0.0 });
            if let Some(v) = over.a {
                pot.a = v;
            }
            if let Some(v) = over.b_lin {
                pot.b_lin = v;
            }
            if let Some(v) = over.c {
                pot.c = v;
            }
        }
        if let Some(v) = over.n_points {
            self.oracle.get_or_insert_with(Default::default).n_points = Some(v);
        }
    }

    pub fn to_system(&self) -> Result<SystemConfig> {
        let pdm = PdmProfile::new(self.pdm.lambda, self.pdm.sigma)?;
        let dislocation = match (self.dislocation.chi, self.dislocation.burgers) {
            (Some(chi), burgers) => DislocationConfig::new(chi, burgers)?,
            (None, Some(b)) => DislocationConfig::from_burgers(b),
            (None, None) => {
                return Err(Error::Config(
                    "dislocation section needs chi or burgers".into(),
                ))
            }
        };
        let gauge = match &self.gauge {
            Some(g) => Some(GaugeConfig::new(g.q, g.b0, g.phi_ab)?),
            None => None,
        };
        let potential = match &self.potential {
            Some(p) => Some(PotentialConfig::new(p.a, p.b_lin, p.c)?),
            None => None,
        };
        SystemConfig::new(pdm, dislocation, gauge, potential, self.particle.k)
    }

    pub fn oracle_settings(&self) -> OracleSettings {
        let mut settings = OracleSettings::default();
        if let Some(section) = &self.oracle {
            if let Some(v) = section.n_points {
                settings.n_points = v;
            }
            if let Some(v) = section.scan_points {
                settings.scan_points = v;
            }
            if let Some(v) = section.bracket_rel {
                settings.bracket_rel = v;
            }
            if let Some(v) = section.f_tol {
                settings.f_tol = v;
            }
            if let Some(v) = section.verdict_rel_tol {
                settings.verdict_rel_tol = v;
            }
            if let Some(v) = section.exp_tail_factor {
                settings.exp_tail_factor = v;
            }
            if let Some(v) = section.gauss_tail_factor {
                settings.gauss_tail_factor = v;
            }
        }
        settings
    }

    /// The resolved configuration as TOML, the exact text a rerun accepts.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("resolved config serializes")
    }
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            n_points: None,
            scan_points: None,
            bracket_rel: None,
            f_tol: None,
            verdict_rel_tol: None,
            exp_tail_factor: None,
            gauss_tail_factor: None,
        }
    }
}
