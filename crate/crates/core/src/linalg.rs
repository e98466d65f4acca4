//! Direct solution of the (possibly indefinite) tangent system.
//!
//! Gaussian elimination with partial pivoting that only touches the band
//! of the matrix. With node-interleaved DOFs the tangent of a short-range
//! interaction is narrow-banded; long-range interactions fall back to a
//! dense LU.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative pivot size below which the matrix is reported singular.
const PIVOT_TOLERANCE: f64 = 1e-14;

/// Lower and upper bandwidth of the nonzero pattern.
pub fn bandwidth(a: &DMatrix<f64>) -> (usize, usize) {
    let (mut kl, mut ku) = (0, 0);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if a[(i, j)] != 0.0 {
                if i > j {
                    kl = kl.max(i - j);
                } else {
                    ku = ku.max(j - i);
                }
            }
        }
    }
    (kl, ku)
}

/// Solves `a x = b`, consuming `a`.
pub fn solve(mut a: DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.len());
    if n == 0 {
        return Ok(DVector::zeros(0));
    }
    let scale = a.amax();
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::SingularTangent { pivot: 0, size: n });
    }
    let (kl, ku) = bandwidth(&a);
    if 4 * (kl + ku) > n {
        return dense(a, b, scale);
    }
    let upper = kl + ku;
    let mut x = b.clone();
    for k in 0..n {
        let last_row = (k + kl).min(n - 1);
        let mut p = k;
        for i in k + 1..=last_row {
            if a[(i, k)].abs() > a[(p, k)].abs() {
                p = i;
            }
        }
        if a[(p, k)].abs() <= PIVOT_TOLERANCE * scale {
            return Err(Error::SingularTangent { pivot: k, size: n });
        }
        let last_col = (k + upper).min(n - 1);
        if p != k {
            for j in k..=last_col {
                a.swap((k, j), (p, j));
            }
            x.swap_rows(k, p);
        }
        let pivot = a[(k, k)];
        for i in k + 1..=last_row {
            let f = a[(i, k)] / pivot;
            if f == 0.0 {
                continue;
            }
            a[(i, k)] = 0.0;
            for j in k + 1..=last_col {
                a[(i, j)] -= f * a[(k, j)];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let last_col = (i + upper).min(n - 1);
        let mut s = x[i];
        for j in i + 1..=last_col {
            s -= a[(i, j)] * x[j];
        }
        x[i] = s / a[(i, i)];
    }
    Ok(x)
}

fn dense(a: DMatrix<f64>, b: &DVector<f64>, scale: f64) -> Result<DVector<f64>> {
    let n = a.nrows();
    let lu = a.lu();
    let u = lu.u();
    for k in 0..n {
        if u[(k, k)].abs() <= PIVOT_TOLERANCE * scale {
            return Err(Error::SingularTangent { pivot: k, size: n });
        }
    }
    lu.solve(b).ok_or(Error::SingularTangent { pivot: n, size: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn banded(n: usize, kl: usize, ku: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |i, j| {
            if (i > j && i - j > kl) || (j > i && j - i > ku) {
                0.0
            } else if i == j {
                // indefinite but nonsingular diagonal, small enough to force pivoting
                rng.gen_range(-0.1..0.1)
            } else {
                rng.gen_range(-1.0..1.0)
            }
        })
    }

    #[test]
    fn detects_bandwidth() {
        let a = banded(30, 3, 5, 1);
        assert_eq!(bandwidth(&a), (3, 5));
    }

    #[test]
    fn banded_matches_dense_with_pivoting() {
        for seed in 0..20 {
            let a = banded(60, 4, 6, seed);
            let b = DVector::from_fn(60, |i, _| (i as f64).sin());
            let x = solve(a.clone(), &b).unwrap();
            let reference = a.clone().lu().solve(&b).unwrap();
            assert!((&x - &reference).amax() < 1e-8 * reference.amax());
            assert!((&a * &x - &b).amax() < 1e-10);
        }
    }

    #[test]
    fn dense_fallback() {
        let a = banded(10, 9, 9, 3);
        let b = DVector::from_element(10, 1.0);
        let x = solve(a.clone(), &b).unwrap();
        assert!((&a * &x - &b).amax() < 1e-10);
    }

    #[test]
    fn singular_matrix_reported() {
        let mut a = banded(40, 2, 2, 5);
        for j in 0..40 {
            a[(7, j)] = 0.0;
        }
        assert!(matches!(
            solve(a, &DVector::from_element(40, 1.0)),
            Err(Error::SingularTangent { .. })
        ));
    }
}
