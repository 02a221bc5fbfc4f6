//! Small dense Cholesky solver for the SPD interpolation systems.

use crate::error::{Error, Result};

/// Cholesky factorization `A = L L^T` of a symmetric matrix stored row-major,
/// overwriting the lower triangle with `L`. Fails with the offending pivot
/// index when a diagonal entry is not strictly positive.
pub(crate) fn cholesky_in_place(a: &mut [f64], n: usize) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite {
                pivot: j,
                diagonal: d,
            });
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    Ok(())
}

/// Solves `A x = b` for each right-hand side using a prior `cholesky_in_place`
/// factor. Right-hand sides are overwritten with the solutions.
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    debug_assert_eq!(b.len(), n);
    // forward substitution L y = b
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    // back substitution L^T x = y
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_spd_system() {
        // A = [[4,2],[2,3]], b = [2,5] -> x = [-0.5, 2]
        let mut a = vec![4.0, 2.0, 2.0, 3.0];
        cholesky_in_place(&mut a, 2).unwrap();
        let mut b = vec![2.0, 5.0];
        cholesky_solve(&a, 2, &mut b);
        assert!((b[0] - (-0.5)).abs() < 1e-14);
        assert!((b[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn reports_pivot_of_indefinite_matrix() {
        let mut a = vec![1.0, 2.0, 2.0, 1.0];
        match cholesky_in_place(&mut a, 2) {
            Err(Error::NotPositiveDefinite { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected pivot failure, got {other:?}"),
        }
    }
}
