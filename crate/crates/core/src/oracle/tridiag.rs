//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, plus
//! inverse iteration for node counting.

use crate::error::{Error, Result};

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below
/// `x`, via the sign count of the `LDLᵀ` pivots.
fn count_below(diag: &[f64], offdiag_sq: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0usize;
    let mut q = 1.0f64;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 { d - x } else { d - x - offdiag_sq[i - 1] / q };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `n_levels` eigenvalues in ascending order. Bisection is driven by
/// the Sturm count, so each eigenvalue is isolated regardless of clustering.
pub fn lowest_eigenvalues(diag: &[f64], offdiag: &[f64], n_levels: usize) -> Result<Vec<f64>> {
    let setup = SturmSetup::new(diag, offdiag, n_levels)?;
    let mut out = Vec::with_capacity(n_levels);
    let mut lower = setup.lo;
    for index in 0..n_levels {
        let (value, bracket_lo) = setup.bisect_index(diag, index, lower);
        out.push(value);
        // The next eigenvalue cannot lie below this one.
        lower = bracket_lo;
    }
    Ok(out)
}

/// The single eigenvalue of ordering `index`, without resolving the ones
/// below it.
pub fn eigenvalue_by_index(diag: &[f64], offdiag: &[f64], index: usize) -> Result<f64> {
    let setup = SturmSetup::new(diag, offdiag, index + 1)?;
    let lo = setup.lo;
    Ok(setup.bisect_index(diag, index, lo).0)
}

struct SturmSetup {
    offdiag_sq: Vec<f64>,
    pivmin: f64,
    lo: f64,
    hi: f64,
}

impl SturmSetup {
    fn new(diag: &[f64], offdiag: &[f64], n_levels: usize) -> Result<Self> {
        let n = diag.len();
        if n == 0 || offdiag.len() + 1 != n {
            return Err(Error::Grid(format!(
                "tridiagonal shape mismatch: diag {n}, offdiag {}",
                offdiag.len()
            )));
        }
        if n_levels > n {
            return Err(Error::Convergence(format!(
                "requested {n_levels} eigenvalues from an order-{n} matrix"
            )));
        }
        let offdiag_sq: Vec<f64> = offdiag.iter().map(|e| e * e).collect();
        let max_e2 = offdiag_sq.iter().fold(0.0f64, |a, &b| a.max(b));
        let pivmin = f64::MIN_POSITIVE * (1.0 + max_e2);

        // Gerschgorin bounds.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let radius = if i > 0 { offdiag[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { offdiag[i].abs() } else { 0.0 };
            lo = lo.min(diag[i] - radius);
            hi = hi.max(diag[i] + radius);
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Grid("non-finite matrix entries".into()));
        }
        let span = hi - lo;
        lo -= 1e-12 * span.abs() + 1e-12;
        hi += 1e-12 * span.abs() + 1e-12;

        let setup = Self { offdiag_sq, pivmin, lo, hi };
        if count_below(diag, &setup.offdiag_sq, hi, setup.pivmin) < n_levels {
            return Err(Error::Convergence(
                "Sturm count cannot isolate the requested number of eigenvalues".into(),
            ));
        }
        Ok(setup)
    }

    /// Bisect for the eigenvalue of the given ordering index; returns the
    /// value and the final lower bracket end.
    fn bisect_index(&self, diag: &[f64], index: usize, lower: f64) -> (f64, f64) {
        let mut a = lower;
        let mut b = self.hi;
        for _ in 0..160 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(diag, &self.offdiag_sq, mid, self.pivmin) > index {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 1e-13 * (a.abs().max(b.abs()).max(1.0)) {
                break;
            }
        }
        (0.5 * (a + b), a)
    }
}

/// Eigenvector for a converged eigenvalue by two rounds of inverse
/// iteration with a partially pivoted tridiagonal solve.
pub fn eigenvector(diag: &[f64], offdiag: &[f64], eigenvalue: f64) -> Vec<f64> {
    let n = diag.len();
    let mut v = vec![1.0; n];
    for _ in 0..2 {
        v = solve_shifted(diag, offdiag, eigenvalue, &v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            for x in &mut v {
                *x /= norm;
            }
        }
    }
    v
}

/// Interior sign changes of a sampled vector, ignoring entries below a
/// relative floor so FD tail noise does not count as nodes.
pub fn count_sign_changes(v: &[f64]) -> usize {
    let peak = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let floor = 1e-8 * peak;
    let mut changes = 0;
    let mut last: Option<f64> = None;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if let Some(prev) = last {
            if prev.signum() != x.signum() {
                changes += 1;
            }
        }
        last = Some(x);
    }
    changes
}

/// Solve `(T − λI) x = b` by Gaussian elimination with partial pivoting on
/// the three tridiagonal bands (plus the fill-in band pivoting creates).
/// Near-singular pivots are expected during inverse iteration and are
/// clamped rather than rejected.
fn solve_shifted(diag: &[f64], offdiag: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut main: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut upper = vec![0.0; n];
    upper[..n - 1].copy_from_slice(offdiag);
    let mut upper2 = vec![0.0; n];
    let mut rhs = b.to_vec();

    let tiny = f64::MIN_POSITIVE.sqrt();
    let guard = |x: f64| if x.abs() < tiny { tiny.copysign(if x == 0.0 { 1.0 } else { x }) } else { x };

    for i in 0..n - 1 {
        let low = offdiag[i];
        if main[i].abs() >= low.abs() {
            let pivot = guard(main[i]);
            main[i] = pivot;
            let factor = low / pivot;
            main[i + 1] -= factor * upper[i];
            rhs[i + 1] -= factor * rhs[i];
        } else {
            // Swap rows i and i+1; the pivot is the subdiagonal entry.
            let factor = main[i] / low;
            let old_main_next = main[i + 1];
            let old_upper_next = if i + 1 < n - 1 { upper[i + 1] } else { 0.0 };
            let old_upper_i = upper[i];
            main[i] = low;
            upper[i] = old_main_next;
            upper2[i] = old_upper_next;
            main[i + 1] = old_upper_i - factor * old_main_next;
            if i + 1 < n - 1 {
                upper[i + 1] = -factor * old_upper_next;
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= factor * rhs[i];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = rhs[i];
        if i + 1 < n {
            sum -= upper[i] * x[i + 1];
        }
        if i + 2 < n {
            sum -= upper2[i] * x[i + 2];
        }
        x[i] = sum / guard(main[i]);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_laplacian_eigenvalues() {
        // −u'' on (0, 1), Dirichlet: discrete eigenvalues are
        // (2 − 2 cos(jπh))/h² with h = 1/(n+1).
        let n = 300;
        let h = 1.0 / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let evals = lowest_eigenvalues(&diag, &off, 3).unwrap();
        for (j, &ev) in evals.iter().enumerate() {
            let theta = (j as f64 + 1.0) * std::f64::consts::PI * h;
            let exact = (2.0 - 2.0 * theta.cos()) / (h * h);
            assert!(
                (ev - exact).abs() < 1e-9 * exact.abs(),
                "eigenvalue {j}: {ev} vs discrete-exact {exact}"
            );
        }
        assert!(evals[0] < evals[1] && evals[1] < evals[2]);
    }

    #[test]
    fn eigenvector_node_counts() {
        let n = 400;
        let h = 1.0 / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let evals = lowest_eigenvalues(&diag, &off, 4).unwrap();
        for (j, &ev) in evals.iter().enumerate() {
            let v = eigenvector(&diag, &off, ev);
            assert_eq!(count_sign_changes(&v), j, "index {j}");
        }
    }

    #[test]
    fn rejects_impossible_requests() {
        let diag = vec![1.0, 2.0];
        let off = vec![0.1];
        assert!(lowest_eigenvalues(&diag, &off, 3).is_err());
        assert!(lowest_eigenvalues(&diag, &[], 1).is_err());
    }
}
