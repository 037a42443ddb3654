//! Exact-where-possible special-function kernel: associated Laguerre
//! polynomials, Kummer polynomials `₁F₁(−n; β; x)`, and biconfluent Heun
//! series coefficients with truncation logic.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! any number of threads.

mod heun;
mod laguerre;

pub use heun::{
    heun_coefficients, heun_coefficients_exact, heun_eval, heun_ode_residual,
    heun_truncated, heun_truncation_zeta, recurrence_residual_exact, ExactHeunParams,
    HeunParams, HeunPolynomial,
};
pub use laguerre::{kummer_poly, laguerre, MAX_DEGREE};
