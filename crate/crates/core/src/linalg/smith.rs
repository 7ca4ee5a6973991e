//! Smith normal form over a Euclidean ring and the ℤ-linear algebra built on it.

use super::{LinalgError, Matrix};
use crate::scalar::EuclideanRing;

/// `left · original · right = diag(diag)` with unimodular `left`, `right`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm<R> {
    /// Elementary divisors `d_1 | d_2 | ...`, nonnegative, length `min(rows, cols)`.
    pub diag: Vec<R>,
    pub left: Matrix<R>,
    pub right: Matrix<R>,
    /// Inverse of `left`, tracked alongside it.
    pub left_inverse: Matrix<R>,
}

impl<R: EuclideanRing> SmithForm<R> {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix with the original's shape.
    pub fn diagonal_matrix(&self) -> Matrix<R> {
        let (rows, cols) = (self.left.rows(), self.right.rows());
        let mut d = Matrix::zeros(rows, cols);
        for (i, v) in self.diag.iter().enumerate() {
            d.set(i, i, v.clone());
        }
        d
    }
}

struct Reducer<R> {
    a: Matrix<R>,
    left: Matrix<R>,
    left_inv: Matrix<R>,
    right: Matrix<R>,
}

impl<R: EuclideanRing> Reducer<R> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
    }

    /// row_i += k · row_j
    fn add_row(&mut self, i: usize, j: usize, k: &R) {
        for m in [&mut self.a, &mut self.left] {
            for c in 0..m.cols() {
                let v = m.get(i, c).clone() + k.clone() * m.get(j, c).clone();
                m.set(i, c, v);
            }
        }
        // inverse: col_j -= k · col_i
        let li = &mut self.left_inv;
        for r in 0..li.rows() {
            let v = li.get(r, j).clone() - k.clone() * li.get(r, i).clone();
            li.set(r, j, v);
        }
    }

    /// col_i += k · col_j
    fn add_col(&mut self, i: usize, j: usize, k: &R) {
        for m in [&mut self.a, &mut self.right] {
            for r in 0..m.rows() {
                let v = m.get(r, i).clone() + k.clone() * m.get(r, j).clone();
                m.set(r, i, v);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.left] {
            for c in 0..m.cols() {
                let v = -m.get(i, c).clone();
                m.set(i, c, v);
            }
        }
        let li = &mut self.left_inv;
        for r in 0..li.rows() {
            let v = -li.get(r, i).clone();
            li.set(r, i, v);
        }
    }

    /// Position of the nonzero entry of least absolute value in the trailing block.
    fn smallest_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.a.rows() {
            for c in t..self.a.cols() {
                let v = self.a.get(r, c);
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if self.a.get(br, bc).abs() <= v.abs() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }
}

/// Smith normal form by elementary row/column operations, always pivoting
/// on the smallest remaining entry.
pub fn smith_normal_form<R: EuclideanRing>(m: &Matrix<R>) -> SmithForm<R> {
    let (rows, cols) = m.shape();
    let mut s = Reducer {
        a: m.clone(),
        left: Matrix::identity(rows),
        left_inv: Matrix::identity(rows),
        right: Matrix::identity(cols),
    };
    let n = rows.min(cols);
    for t in 0..n {
        while let Some((pr, pc)) = s.smallest_from(t) {
            s.swap_rows(t, pr);
            s.swap_cols(t, pc);
            let pivot = s.a.get(t, t).clone();
            let mut clean = true;
            for r in t + 1..rows {
                let v = s.a.get(r, t).clone();
                if v.is_zero() {
                    continue;
                }
                let q = v.div_floor(&pivot);
                s.add_row(r, t, &-q);
                if !s.a.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                let v = s.a.get(t, c).clone();
                if v.is_zero() {
                    continue;
                }
                let q = v.div_floor(&pivot);
                s.add_col(c, t, &-q);
                if !s.a.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and go again.
            let offending = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| !s.a.get(r, c).is_multiple_of(&pivot)));
            match offending {
                Some(r) => s.add_row(t, r, &R::one()),
                None => break,
            }
        }
        if s.a.get(t, t).is_negative() {
            s.negate_row(t);
        }
    }
    let diag = (0..n).map(|i| s.a.get(i, i).clone()).collect();
    SmithForm {
        diag,
        left: s.left,
        right: s.right,
        left_inverse: s.left_inv,
    }
}

/// A ℤ-basis of the integer right kernel, as columns.
pub fn integer_kernel<R: EuclideanRing>(m: &Matrix<R>) -> Matrix<R> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    snf.right.select_cols(&idx)
}

/// A ℤ-basis (as columns) of the lattice generated by the columns of `g`.
pub fn lattice_basis<R: EuclideanRing>(g: &Matrix<R>) -> Matrix<R> {
    let snf = smith_normal_form(g);
    let r = snf.rank();
    Matrix::from_fn(g.rows(), r, |row, i| {
        snf.left_inverse.get(row, i).clone() * snf.diag[i].clone()
    })
}

/// An integer solution of `a x = b` (column by column), if one exists.
pub fn solve_integer<R: EuclideanRing>(
    a: &Matrix<R>,
    b: &Matrix<R>,
) -> Result<Option<Matrix<R>>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::Shape {
            op: "solve_integer",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let snf = smith_normal_form(a);
    let ub = snf.left.try_mul(b)?;
    let mut y = Matrix::zeros(a.cols(), b.cols());
    for c in 0..b.cols() {
        for i in 0..a.rows() {
            let v = ub.get(i, c);
            let d = snf.diag.get(i).cloned().unwrap_or_else(R::zero);
            if d.is_zero() {
                if !v.is_zero() {
                    return Ok(None);
                }
            } else if v.is_multiple_of(&d) {
                y.set(i, c, v.clone() / d);
            } else {
                return Ok(None);
            }
        }
    }
    Ok(Some(snf.right.try_mul(&y)?))
}

/// True when every divisibility condition of the Smith form holds.
pub fn divisibility_chain_holds<R: EuclideanRing>(diag: &[R]) -> bool {
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    }) && diag.iter().all(|d| !d.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;
    use crate::{IntMatrix, Z};
    use num_traits::Signed;
    use proptest::prelude::*;

    fn zmat(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Z::from(x)).collect())
                .collect(),
            cols,
        )
        .unwrap()
    }

    fn check(m: &IntMatrix) -> SmithForm<Z> {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.left * m) * &s.right, s.diagonal_matrix());
        assert_eq!(determinant(&s.left).unwrap().abs(), Z::from(1));
        assert_eq!(determinant(&s.right).unwrap().abs(), Z::from(1));
        assert!(is_identity(&(&s.left * &s.left_inverse)));
        assert!(divisibility_chain_holds(&s.diag));
        s
    }

    use crate::linalg::is_identity;

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.diag, vec![Z::from(1); 3]);
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.diag, vec![Z::from(0); 2]);
    }

    #[test]
    fn diag_two_three_becomes_one_six() {
        let s = check(&zmat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diag, vec![Z::from(1), Z::from(6)]);
    }

    #[test]
    fn integer_solving() {
        let a = zmat(&[&[2, 0], &[0, 3]]);
        assert!(solve_integer(&a, &zmat(&[&[4], &[9]])).unwrap().is_some());
        assert!(solve_integer(&a, &zmat(&[&[1], &[0]])).unwrap().is_none());
        let k = integer_kernel(&zmat(&[&[2, -4]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(
            k.col(0).iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vec![Z::from(2), Z::from(1)]
        );
    }

    #[test]
    fn lattice_basis_of_redundant_generators() {
        // 4 and 6 generate 2ℤ
        let b = lattice_basis(&zmat(&[&[4, 6]]));
        assert_eq!(b.shape(), (1, 1));
        assert_eq!(b.get(0, 0).abs(), Z::from(2));
    }

    proptest! {
        #[test]
        fn reconstruction(r in 0usize..5, c in 0usize..5, seed in proptest::collection::vec(-9i64..=9, 25)) {
            let m = IntMatrix::from_fn(r, c, |i, j| Z::from(seed[i * 5 + j]));
            check(&m);
        }
    }
}
