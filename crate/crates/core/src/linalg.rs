//! Tiny dense exact-rational matrix helpers (Jacobian-sized problems only).
//! The sparse jet-space elimination lives in [`crate::jet`].

use num_traits::{One, Zero};

use crate::poly::Rat;

pub type Matrix = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn rank(m: &Matrix) -> usize {
    rref_with_transform(m).2.len()
}

/// Reduced row echelon form. Returns `(R, T, pivot_columns)` with
/// `T * m = R`, `T` square and invertible.
pub fn rref_with_transform(m: &Matrix) -> (Matrix, Matrix, Vec<usize>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = m.clone();
    let mut t = identity(rows);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(src) = (row..rows).find(|&i| !r[i][col].is_zero()) else {
            continue;
        };
        r.swap(row, src);
        t.swap(row, src);
        let inv = r[row][col].recip();
        for v in r[row].iter_mut() {
            *v = &*v * &inv;
        }
        for v in t[row].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != row && !r[i][col].is_zero() {
                let f = r[i][col].clone();
                for j in 0..cols {
                    r[i][j] = &r[i][j] - &(&f * &r[row][j]);
                }
                for j in 0..rows {
                    t[i][j] = &t[i][j] - &(&f * &t[row][j]);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    (r, t, pivots)
}

pub fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let (r, t, pivots) = rref_with_transform(m);
    if pivots.len() == n && r == identity(n) {
        Some(t)
    } else {
        None
    }
}
