//! Biconfluent Heun series for the charged harmonic-plus-Coulomb radial
//! family.
//!
//! The series `H(r) = Σ C_j r^j` solves
//!
//! ```text
//! r H'' + [(2L + 1) − 2ω r²] H' − [ζ r + b̃] H = 0,      L = |L̃| ≥ 0,
//! ```
//!
//! with seeds `C₀ = 1`, `C₁ = b̃/(1 + 2L)` and the three-term recurrence
//!
//! ```text
//! C_{j+2} (j+2)(j + 2L + 2) = b̃ C_{j+1} + (2ω j + ζ) C_j .
//! ```
//!
//! Requiring a polynomial of degree `n` forces `ζ = −2ωn`; that single
//! condition does not terminate the series when `b̃ ≠ 0` (then `C_{n+1} ≠ 0`
//! generically), which is what makes the family only conditionally exact.
//! The recurrence is ground truth here; truncated polynomials report their
//! leftover tail through [`heun_ode_residual`] instead of hiding it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parameters of the biconfluent Heun series.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HeunParams {
    /// The quantity `2|L̃|` (dimensionless, ≥ 0).
    pub two_l_abs: f64,
    /// Coulombic-like coupling `b̃`.
    pub b_tilde: f64,
    /// Magnetic confinement strength `ω > 0`.
    pub omega: f64,
    /// Truncation parameter `ζ`.
    pub zeta: f64,
}

impl HeunParams {
    pub fn new(two_l_abs: f64, b_tilde: f64, omega: f64, zeta: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::Domain(format!("heun omega must be > 0, got {omega}")));
        }
        if !(two_l_abs >= 0.0) {
            return Err(Error::Domain(format!(
                "heun two_l_abs must be >= 0, got {two_l_abs}"
            )));
        }
        if !zeta.is_finite() || !b_tilde.is_finite() {
            return Err(Error::Domain("heun parameters must be finite".into()));
        }
        Ok(Self { two_l_abs, b_tilde, omega, zeta })
    }

    /// Parameters of a series meant to truncate at degree `n`, with
    /// `ζ = −2ωn` exact by construction.
    pub fn truncated(two_l_abs: f64, b_tilde: f64, omega: f64, n: usize) -> Result<Self> {
        Self::new(two_l_abs, b_tilde, omega, heun_truncation_zeta(n, omega))
    }
}

/// The truncation value `ζ = −2ωn` that kills the `C_n → C_{n+2}` channel.
pub fn heun_truncation_zeta(n: usize, omega: f64) -> f64 {
    -2.0 * omega * n as f64
}

/// A generated coefficient sequence `C₀ … C_N`, optionally tagged with the
/// degree at which the caller intends the series to be read as a polynomial.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HeunPolynomial {
    pub params: HeunParams,
    pub coeffs: Vec<f64>,
    pub truncation_degree: Option<usize>,
}

/// Generate `C₀ … C_order` strictly from the recurrence.
pub fn heun_coefficients(params: &HeunParams, order: usize) -> Result<HeunPolynomial> {
    let seed_denom = 1.0 + params.two_l_abs;
    if seed_denom == 0.0 {
        return Err(Error::Domain("heun seed division by 1 + 2|L| = 0".into()));
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(1.0);
    if order >= 1 {
        coeffs.push(params.b_tilde / seed_denom);
    }
    for idx in 2..=order {
        let j = (idx - 2) as f64;
        let denom = (j + 2.0) * (j + params.two_l_abs + 2.0);
        let value = (params.b_tilde * coeffs[idx - 1]
            + (2.0 * params.omega * j + params.zeta) * coeffs[idx - 2])
            / denom;
        coeffs.push(value);
    }
    Ok(HeunPolynomial { params: *params, coeffs, truncation_degree: None })
}

/// Generate the degree-`n` polynomial of a series whose `ζ` satisfies the
/// truncation condition `ζ = −2ωn` (to within one ulp).
pub fn heun_truncated(params: &HeunParams, n: usize) -> Result<HeunPolynomial> {
    let expected = heun_truncation_zeta(n, params.omega);
    if ulp_distance(params.zeta, expected) > 1 {
        return Err(Error::Domain(format!(
            "zeta = {} does not satisfy the truncation condition -2*omega*n = {expected}",
            params.zeta
        )));
    }
    let mut poly = heun_coefficients(params, n)?;
    poly.truncation_degree = Some(n);
    Ok(poly)
}

/// `Σ C_j r^j` over the stored coefficients.
pub fn heun_eval(poly: &HeunPolynomial, r: f64) -> f64 {
    poly.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

/// Residual of the biconfluent Heun equation at `r`, using exact
/// term-by-term differentiation of the stored polynomial:
/// `r H'' + [(2L+1) − 2ωr²] H' − [ζ r + b̃] H`.
pub fn heun_ode_residual(poly: &HeunPolynomial, r: f64) -> f64 {
    let c = &poly.coeffs;
    let h = heun_eval(poly, r);
    let mut h1 = 0.0;
    for (j, &cj) in c.iter().enumerate().skip(1).rev() {
        h1 = h1 * r + j as f64 * cj;
    }
    let mut h2 = 0.0;
    for (j, &cj) in c.iter().enumerate().skip(2).rev() {
        h2 = h2 * r + (j * (j - 1)) as f64 * cj;
    }
    let p = &poly.params;
    r * h2 + ((p.two_l_abs + 1.0) - 2.0 * p.omega * r * r) * h1 - (p.zeta * r + p.b_tilde) * h
}

impl HeunPolynomial {
    /// Relative defect of the recurrence identity at index `j`
    /// (`C_{j+2}` vs. the right-hand side), scaled by the largest term.
    pub fn recurrence_residual(&self, j: usize) -> f64 {
        let p = &self.params;
        let lhs = self.coeffs[j + 2] * (j as f64 + 2.0) * (j as f64 + p.two_l_abs + 2.0);
        let t1 = p.b_tilde * self.coeffs[j + 1];
        let t2 = (2.0 * p.omega * j as f64 + p.zeta) * self.coeffs[j];
        let scale = lhs.abs().max(t1.abs()).max(t2.abs()).max(f64::MIN_POSITIVE);
        (lhs - t1 - t2).abs() / scale
    }

    /// Largest relative recurrence defect over all generated triples.
    pub fn max_recurrence_residual(&self) -> f64 {
        if self.coeffs.len() < 3 {
            return 0.0;
        }
        (0..self.coeffs.len() - 2)
            .map(|j| self.recurrence_residual(j))
            .fold(0.0, f64::max)
    }
}

/// Exact-rational parameters for coefficient generation when every input is
/// rational; lets "recurrence residual = 0" be asserted literally.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactHeunParams {
    pub two_l_abs: BigRational,
    pub b_tilde: BigRational,
    pub omega: BigRational,
    pub zeta: BigRational,
}

impl ExactHeunParams {
    /// Build from integer ratios `(numerator, denominator)`.
    pub fn from_ratios(
        two_l_abs: (i64, i64),
        b_tilde: (i64, i64),
        omega: (i64, i64),
        zeta: (i64, i64),
    ) -> Result<Self> {
        let mk = |(n, d): (i64, i64)| -> Result<BigRational> {
            if d == 0 {
                return Err(Error::Domain("rational with zero denominator".into()));
            }
            Ok(BigRational::new(BigInt::from(n), BigInt::from(d)))
        };
        let params = Self {
            two_l_abs: mk(two_l_abs)?,
            b_tilde: mk(b_tilde)?,
            omega: mk(omega)?,
            zeta: mk(zeta)?,
        };
        if params.omega <= BigRational::zero() || params.two_l_abs < BigRational::zero() {
            return Err(Error::Domain("heun omega must be > 0 and 2|L| >= 0".into()));
        }
        Ok(params)
    }
}

/// Exact-rational coefficient sequence `C₀ … C_order`.
pub fn heun_coefficients_exact(params: &ExactHeunParams, order: usize) -> Vec<BigRational> {
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(one.clone());
    if order >= 1 {
        coeffs.push(&params.b_tilde / (&one + &params.two_l_abs));
    }
    for idx in 2..=order {
        let j = BigRational::from_integer(BigInt::from((idx - 2) as i64));
        let denom = (&j + &two) * (&j + &params.two_l_abs + &two);
        let value = (&params.b_tilde * &coeffs[idx - 1]
            + (&two * &params.omega * &j + &params.zeta) * &coeffs[idx - 2])
            / denom;
        coeffs.push(value);
    }
    coeffs
}

/// Exact recurrence residual at index `j`; zero iff the triple satisfies the
/// recurrence identically.
pub fn recurrence_residual_exact(
    params: &ExactHeunParams,
    coeffs: &[BigRational],
    j: usize,
) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let jr = BigRational::from_integer(BigInt::from(j as i64));
    let lhs = &coeffs[j + 2] * (&jr + &two) * (&jr + &params.two_l_abs + &two);
    let rhs = &params.b_tilde * &coeffs[j + 1]
        + (&two * &params.omega * &jr + &params.zeta) * &coeffs[j];
    lhs - rhs
}

fn ulp_distance(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    if a.is_nan() || b.is_nan() {
        return u64::MAX;
    }
    let ordinal = |x: f64| -> i64 {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN.wrapping_sub(bits)
        } else {
            bits
        }
    };
    ordinal(a).wrapping_sub(ordinal(b)).unsigned_abs()
}
