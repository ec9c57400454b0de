//! Thomas algorithm for tridiagonal systems.

/// Solves `A x = d` in place where `A` has sub-diagonal `lower`, diagonal
/// `diag` and super-diagonal `upper` (`lower[0]` and `upper[n-1]` unused).
/// `scratch` must have length `n`; it is overwritten.
///
/// No pivoting: callers pass diagonally dominant systems (M-matrices in the
/// solver), for which the sweep is stable.
pub fn thomas_solve_in_place(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64], scratch: &mut [f64]) {
    let n = diag.len();
    debug_assert!(lower.len() == n && upper.len() == n && rhs.len() == n && scratch.len() == n);
    if n == 0 {
        return;
    }
    let mut denom = diag[0];
    scratch[0] = upper[0] / denom;
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - lower[i] * scratch[i - 1];
        scratch[i] = if i + 1 < n { upper[i] / denom } else { 0.0 };
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

/// Allocating convenience wrapper around [`thomas_solve_in_place`].
pub fn thomas_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let mut x = rhs.to_vec();
    let mut scratch = vec![0.0; diag.len()];
    thomas_solve_in_place(lower, diag, upper, &mut x, &mut scratch);
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let lower = [0.0, -1.0, -1.0];
        let diag = [2.0, 2.0, 2.0];
        let upper = [-1.0, -1.0, 0.0];
        let x = thomas_solve(&lower, &diag, &upper, &[1.0, 0.0, 1.0]);
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_dense_multiplication() {
        let n = 40;
        let lower: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { -0.3 - 0.01 * i as f64 }).collect();
        let upper: Vec<f64> = (0..n).map(|i| if i + 1 == n { 0.0 } else { -0.7 + 0.005 * i as f64 }).collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.5 + (i as f64).sin()).collect();
        let truth: Vec<f64> = (0..n).map(|i| (0.37 * i as f64).cos()).collect();
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let mut s = diag[i] * truth[i];
                if i > 0 {
                    s += lower[i] * truth[i - 1];
                }
                if i + 1 < n {
                    s += upper[i] * truth[i + 1];
                }
                s
            })
            .collect();
        let x = thomas_solve(&lower, &diag, &upper, &rhs);
        for (a, b) in x.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
