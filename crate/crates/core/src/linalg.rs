use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `n x n` and is destroyed; the solution overwrites `b`.
pub(crate) fn solve_in_place(a: &mut [f64], b: &mut [f64]) -> Result<()> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap_or(col);
        let pivot = a[pivot_row * n + col];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular);
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let (upper, lower) = a.split_at_mut((col + 1) * n);
        let pivot_slice = &upper[col * n + col..col * n + n];
        for (r, row) in lower.chunks_exact_mut(n).enumerate() {
            let factor = row[col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for (x, p) in row[col..].iter_mut().zip(pivot_slice) {
                *x -= factor * p;
            }
            b[col + 1 + r] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let row = &a[col * n..col * n + n];
        let tail: f64 = row[col + 1..]
            .iter()
            .zip(&b[col + 1..])
            .map(|(x, y)| x * y)
            .sum();
        b[col] = (b[col] - tail) / row[col];
    }
    Ok(())
}

/// Inverse of a row-major `n x n` matrix by Gauss-Jordan elimination with
/// partial pivoting.
pub(crate) fn invert(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut inv = alloc::vec![0.0; n * n];
    for k in 0..n {
        inv[k * n + k] = 1.0;
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap_or(col);
        let pivot = a[pivot_row * n + col];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular);
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
                inv.swap(col * n + k, pivot_row * n + k);
            }
        }
        for k in 0..n {
            a[col * n + k] /= pivot;
            inv[col * n + k] /= pivot;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r * n + col];
            if factor == 0.0 {
                continue;
            }
            for k in 0..n {
                a[r * n + k] -= factor * a[col * n + k];
                inv[r * n + k] -= factor * inv[col * n + k];
            }
        }
    }
    Ok(inv)
}

pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    solve_in_place(&mut a, &mut b)?;
    Ok(b)
}
