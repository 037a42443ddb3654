//! Spectra and radial wavefunctions of position-dependent-mass (PDM)
//! Schrödinger particles in an elastic medium with a space-like screw
//! dislocation, with optional uniform magnetic and Aharonov–Bohm flux
//! fields.
//!
//! The mass profile is the power law `M(r) = m₀ λ r^σ` in `ħ = 2m₀ = 1`
//! units. Separating `ψ = e^{iℓφ} e^{ikz} R(r)` and removing the first
//! derivative with `R = √(f/r) U` reduces every scenario to a
//! one-dimensional operator `−U'' + W(r) U = τ U` whose coefficients may
//! depend on the energy itself, making the spectral problem self-consistent.
//!
//! The crate is organized around that reduction:
//!
//! * [`specfun`] — Laguerre/Kummer polynomials and the biconfluent Heun
//!   three-term recurrence with truncation logic,
//! * [`model`] — physical configuration, the reduced radial problem, and
//!   the classification into analytically solvable families,
//! * [`spectra`] — closed-form eigenvalues and radial eigenfunctions for
//!   the five solvable families, with validity reporting,
//! * [`oracle`] — an independent finite-difference eigensolver plus a
//!   self-consistent energy root-finder that audits every closed form,
//! * [`analysis`] — parameter sweeps, level-crossing detection and
//!   degeneracy classification.

pub mod analysis;
pub mod error;
pub mod model;
pub mod oracle;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
