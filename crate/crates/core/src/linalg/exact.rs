//! Exact elimination over a field: rank, kernels, images, solving.

use num_traits::{Num, One, Zero};

use super::{LinalgError, Matrix};
use crate::scalar::Field;

/// Rank over the field by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so coefficient growth
/// stays polynomial even though the scalar type is exact.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    bareiss(m).0
}

/// Determinant of a square matrix over any integral domain with exact
/// division (ℤ, ℚ, ...), again by Bareiss elimination.
pub fn determinant<T: Clone + Num>(m: &Matrix<T>) -> Result<T, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.shape()));
    }
    let (r, sign, last) = bareiss(m);
    if r < m.rows() {
        return Ok(T::zero());
    }
    Ok(if sign { T::zero() - last } else { last })
}

/// Returns (rank, odd number of row swaps, last pivot).
fn bareiss<T: Clone + Num>(m: &Matrix<T>) -> (usize, bool, T) {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut prev = T::one();
    let mut row = 0;
    let mut swapped = false;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            a.swap_rows(p, row);
            swapped = !swapped;
        }
        let pivot = a.get(row, col).clone();
        for r in row + 1..rows {
            let lead = a.get(r, col).clone();
            for c in col + 1..cols {
                let v = (pivot.clone() * a.get(r, c).clone()
                    - lead.clone() * a.get(row, c).clone())
                    / prev.clone();
                a.set(r, c, v);
            }
            a.set(r, col, T::zero());
        }
        prev = pivot;
        row += 1;
    }
    (row, swapped, prev)
}

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = F::one() / a.get(row, col).clone();
        for c in col..cols {
            let v = a.get(row, c).clone() * inv.clone();
            a.set(row, c, v);
        }
        for r in 0..rows {
            if r == row || a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col).clone();
            for c in col..cols {
                let v = a.get(r, c).clone() - f.clone() * a.get(row, c).clone();
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Columns form a basis of the right kernel; `cols - rank` of them.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let cols = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    Matrix::from_fn(cols, free.len(), |row, k| {
        let fc = free[k];
        if row == fc {
            F::one()
        } else if let Some(i) = pivots.iter().position(|&pc| pc == row) {
            -r.get(i, fc).clone()
        } else {
            F::zero()
        }
    })
}

/// A basis of the column space, chosen among the columns of `m`.
pub fn image_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let (_, pivots) = rref(m);
    m.select_cols(&pivots)
}

/// `ambient_dim - rank(sub)`: the dimension of ambient / span(columns of sub).
pub fn quotient_dim<F: Field>(sub: &Matrix<F>, ambient_dim: usize) -> Result<usize, LinalgError> {
    if sub.rows() != ambient_dim {
        return Err(LinalgError::Shape {
            op: "quotient_dim",
            left: sub.shape(),
            right: (ambient_dim, sub.cols()),
        });
    }
    Ok(ambient_dim - rank(sub))
}

/// Some `x` with `a x = b`, or `None` if the system is inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Option<Matrix<F>>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::Shape {
            op: "solve",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let n = a.cols();
    let aug = a.hstack(b)?;
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= n) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (i, &pc) in pivots.iter().enumerate() {
        for c in 0..b.cols() {
            x.set(pc, c, r.get(i, n + c).clone());
        }
    }
    Ok(Some(x))
}

pub fn in_column_space<F: Field>(a: &Matrix<F>, v: &[F]) -> bool {
    let b = Matrix::column_vector(v.to_vec());
    matches!(solve(a, &b), Ok(Some(_)))
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.shape()));
    }
    solve(m, &Matrix::identity(m.rows()))?.ok_or(LinalgError::Singular)
}

/// Canonical representatives of the columns of `v` modulo span(columns of `sub`).
///
/// Two vectors in the same coset map to the same output, so anything
/// computed from the result is independent of the chosen representative.
pub fn reduce_modulo<F: Field>(sub: &Matrix<F>, v: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
    if sub.rows() != v.rows() {
        return Err(LinalgError::Shape {
            op: "reduce_modulo",
            left: sub.shape(),
            right: v.shape(),
        });
    }
    let (basis, pivots) = rref(&sub.transpose());
    let mut out = v.clone();
    for c in 0..out.cols() {
        for (i, &p) in pivots.iter().enumerate() {
            let coef = out.get(p, c).clone();
            if coef.is_zero() {
                continue;
            }
            for r in 0..out.rows() {
                let val = out.get(r, c).clone() - coef.clone() * basis.get(i, r).clone();
                out.set(r, c, val);
            }
        }
    }
    Ok(out)
}

/// Rank of span(extra) inside ambient / span(base).
pub fn relative_rank<F: Field>(base: &Matrix<F>, extra: &Matrix<F>) -> Result<usize, LinalgError> {
    Ok(rank(&base.hstack(extra)?) - rank(base))
}

pub fn is_identity<T: Clone + Zero + One + PartialEq>(m: &Matrix<T>) -> bool {
    m.is_square() && *m == Matrix::identity(m.rows())
}
