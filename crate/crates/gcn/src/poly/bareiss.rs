//! Fraction-free elimination over the integers.
//!
//! Both routines keep every intermediate entry an exact minor of the input
//! matrix (Bareiss recurrence), so integer division is always exact and no
//! rational arithmetic happens until results are read out.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::geom::Rat;

/// Determinant by fraction-free forward elimination. Pivot selection is the
/// first row with a nonzero entry, which keeps the routine deterministic.
pub(crate) fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = match (k..n).find(|&r| !m[r][k].is_zero()) {
            Some(r) => r,
            None => return BigInt::zero(),
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if sign < 0 {
        -prev
    } else {
        prev
    }
}

/// Inverse by fraction-free Gauss-Jordan on the augmented matrix. Returns
/// the exact rational inverse, or `None` when the matrix is singular.
pub(crate) fn invert(m: &[Vec<BigInt>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let width = 2 * n;
    let mut aug: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            debug_assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            r
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !aug[r][k].is_zero())?;
        if pivot_row != k {
            aug.swap(k, pivot_row);
        }
        let pivot = aug[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = aug[i][k].clone();
            for j in 0..width {
                if j == k {
                    continue;
                }
                let num = &pivot * &aug[i][j] - &factor * &aug[k][j];
                aug[i][j] = num / &prev;
            }
            aug[i][k] = BigInt::zero();
        }
        prev = pivot;
    }

    // Each row i now reads d_i * e_i on the left and d_i * inv[i] on the
    // right; divide row-wise rather than assuming a common diagonal.
    let mut inv = Vec::with_capacity(n);
    for i in 0..n {
        let d = aug[i][i].clone();
        if d.is_zero() {
            return None;
        }
        let row: Vec<Rat> = (0..n)
            .map(|j| Rat::new(aug[i][n + j].clone(), d.clone()))
            .collect();
        inv.push(row);
    }
    Some(inv)
}
