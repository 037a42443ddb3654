//! Physical configuration, the PDM mass functions, the reduced
//! one-dimensional radial problem, and the classification of configurations
//! into analytically solvable families.

mod config;
mod problem;
mod residual;

pub use config::{
    classify, DislocationConfig, GaugeConfig, PdmProfile, PotentialConfig, SolvableFamily,
    SystemConfig,
};
pub use problem::{
    build_effective_problem, case_parameters, case_parameters_for, mass_multiplier,
    mass_term, AffineEnergy, CaseParameters, EffectiveRadialProblem, PowerTerm,
};
pub use residual::{
    apply_reduced_hamiltonian, apply_reduced_hamiltonian_with, ResidualSamples,
    SignConvention,
};
