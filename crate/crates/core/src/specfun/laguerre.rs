//! Associated Laguerre polynomials and Kummer polynomials.
//!
//! Both are evaluated as finite, numerically stable recurrences; nothing
//! here is an asymptotic or truncated-series approximation.

use crate::error::{Error, Result};

/// Hard cap on polynomial degree; guards factorial growth in callers that
/// loop the recurrences.
pub const MAX_DEGREE: usize = 200;

/// Associated Laguerre polynomial `L_n^α(x)` by the ascending three-term
/// recurrence in `n`:
///
/// ```text
/// (n+1) L_{n+1}^α = (2n + 1 + α − x) L_n^α − (n + α) L_{n−1}^α
/// ```
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!(
            "laguerre requires alpha > -1, got {alpha}"
        )));
    }
    if n > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "laguerre degree {n} exceeds the recurrence cap {MAX_DEGREE}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + alpha - x) * cur - (m + alpha) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Kummer polynomial `₁F₁(−n; β; x)`, the confluent hypergeometric series
/// truncated by the nonpositive-integer numerator parameter:
///
/// ```text
/// ₁F₁(−n; β; x) = Σ_{j=0}^{n} (−n)_j / ((β)_j j!) · x^j
/// ```
pub fn kummer_poly(n: usize, beta: f64, x: f64) -> Result<f64> {
    if n > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "kummer_poly degree {n} exceeds the recurrence cap {MAX_DEGREE}"
        )));
    }
    // β ∈ {0, −1, …, −n} puts a pole of the Pochhammer ratio inside (or at
    // the edge of) the finite sum.
    if beta <= 0.0 && beta == beta.trunc() && beta >= -(n as f64) {
        return Err(Error::Domain(format!(
            "kummer_poly pole: beta = {beta} is a nonpositive integer >= -{n}"
        )));
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..n {
        let j = j as f64;
        term *= (j - n as f64) * x / ((beta + j) * (j + 1.0));
        sum += term;
    }
    Ok(sum)
}
