//! Dense helpers for the tiny systems that show up in hull and gradient code.

use crate::real::Real;

/// Solves `m · x = rhs` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot falls below `rel_tol` times the largest
/// absolute entry of `m`.
pub(crate) fn solve_square<F: Real>(mut m: Vec<Vec<F>>, mut rhs: Vec<F>, rel_tol: F) -> Option<Vec<F>> {
    let n = rhs.len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(F::zero(), |acc, v| acc.max(v.abs()));
    if scale == F::zero() || !scale.is_finite() {
        return None;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[pivot][col].abs() <= rel_tol * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == F::zero() {
                continue;
            }
            for c in col..n {
                let t = m[col][c];
                m[r][c] = m[r][c] - f * t;
            }
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    let mut x = vec![F::zero(); n];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for c in r + 1..n {
            s = s - m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}
