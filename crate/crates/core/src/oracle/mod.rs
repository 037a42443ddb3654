//! Independent numerical verification: a finite-difference eigensolver for
//! frozen radial operators, a self-consistent energy root-finder for the
//! energy-embedded problems, residual norms over analytic wavefunctions,
//! and formula audits.
//!
//! Everything is pure given its inputs; independent `(n_r, ℓ, parameter)`
//! evaluations can run concurrently and results do not depend on
//! scheduling.

mod audit;
mod fd;
mod selfconsistent;
mod tridiag;

pub use audit::{audit, AuditReport, HeunAudit, RichardsonPair, TargetSignAudit, Verdict};
pub use fd::{fd_eigenpair, fd_eigenvalue_indicial, fd_spectrum, fd_spectrum_indicial, node_count, FdGrid};
pub use selfconsistent::{
    oracle_problem, residual_norm, self_consistent_energy, self_consistent_energy_in,
    OracleSettings,
};
pub use tridiag::{count_sign_changes, eigenvector, lowest_eigenvalues};
