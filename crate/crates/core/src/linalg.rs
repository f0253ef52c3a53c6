//! Exact linear algebra: fraction-free (Bareiss) elimination over integral
//! domains and Gauss-Jordan elimination over fields.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::scalar::{common_denominator, scaled_integer, Field, IntegralDomain};
use crate::Rational;

/// Determinant by fraction-free elimination with row pivoting.
pub fn bareiss_det<T: IntegralDomain>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return T::zero();
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            eliminate_row(row, pivot_row, k, &prev);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn eliminate_row<T: IntegralDomain>(row: &mut [T], pivot_row: &[T], col: usize, prev: &T) {
    let pivot = &pivot_row[col];
    let factor = std::mem::replace(&mut row[col], T::zero());
    for j in col + 1..row.len() {
        let cur = std::mem::replace(&mut row[j], T::zero());
        let mut v = pivot.clone() * cur;
        if !factor.is_zero() && !pivot_row[j].is_zero() {
            v = v - factor.clone() * pivot_row[j].clone();
        }
        row[j] = v.exact_div(prev);
    }
}

/// Rank by fraction-free echelon reduction. Row updates run in parallel.
pub fn bareiss_rank<T: IntegralDomain>(m: Vec<Vec<T>>) -> usize {
    bareiss_pivots(m).len()
}

/// Pivot columns of the fraction-free echelon form: column `j` is a pivot
/// exactly when it is independent of the columns before it.
pub fn bareiss_pivots<T: IntegralDomain>(mut m: Vec<Vec<T>>) -> Vec<usize> {
    let nrows = m.len();
    let Some(ncols) = m.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut prev = T::one();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        rest.par_iter_mut()
            .for_each(|row| eliminate_row(row, pivot_row, col, &prev));
        prev = m[rank][col].clone();
        rank += 1;
        pivots.push(col);
    }
    pivots
}

/// Reduced row echelon form over a field; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over a field by Gauss-Jordan elimination.
pub fn field_rank<F: Field>(mut m: Vec<Vec<F>>) -> usize {
    rref(&mut m).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn nullspace<F: Field>(mut m: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); ncols];
            x[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Scale each row to clear denominators; row scaling preserves rank.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let den = common_denominator(r.iter());
            r.iter().map(|q| scaled_integer(q, &den)).collect()
        })
        .collect()
}

/// Exact rank of a rational matrix through the fraction-free integer path.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    bareiss_rank(integer_rows(rows))
}

/// Transpose of a rectangular matrix.
pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}
