//! Finitely presented abelian groups and the orders of kernels and cokernels
//! of maps between them.

use std::fmt;

use super::smith::{integer_kernel, lattice_basis, smith_normal_form, solve_integer};
use super::{LinalgError, Matrix};
use crate::scalar::EuclideanRing;

/// `ℤ^generators / span(columns of relations)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FPAbelianGroup<R> {
    generators: usize,
    relations: Matrix<R>,
}

impl<R: EuclideanRing> FPAbelianGroup<R> {
    pub fn new(generators: usize, relations: Matrix<R>) -> Result<Self, LinalgError> {
        if relations.rows() != generators {
            return Err(LinalgError::Shape {
                op: "presentation",
                left: relations.shape(),
                right: (generators, relations.cols()),
            });
        }
        Ok(FPAbelianGroup {
            generators,
            relations,
        })
    }

    /// ℤ^n with no relations.
    pub fn free(n: usize) -> Self {
        FPAbelianGroup {
            generators: n,
            relations: Matrix::zeros(n, 0),
        }
    }

    /// ℤ/n_1 ⊕ ... ⊕ ℤ/n_k (an entry 0 gives a free summand).
    pub fn cyclic_sum(orders: &[R]) -> Self {
        let k = orders.len();
        let rel = Matrix::from_fn(
            k,
            k,
            |r, c| if r == c { orders[r].clone() } else { R::zero() },
        );
        FPAbelianGroup {
            generators: k,
            relations: rel,
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &Matrix<R> {
        &self.relations
    }

    /// Order of the group itself.
    pub fn order(&self) -> GroupOrder<R> {
        order_of_quotient(&self.relations, self.generators)
    }
}

/// A homomorphism given by an integer matrix on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct AbMap<R> {
    source: FPAbelianGroup<R>,
    target: FPAbelianGroup<R>,
    matrix: Matrix<R>,
}

impl<R: EuclideanRing> AbMap<R> {
    /// Checks shape and that source relations land in the target's relation
    /// lattice (solvability over ℤ).
    pub fn new(
        source: FPAbelianGroup<R>,
        target: FPAbelianGroup<R>,
        matrix: Matrix<R>,
    ) -> Result<Self, LinalgError> {
        if matrix.shape() != (target.generators, source.generators) {
            return Err(LinalgError::Shape {
                op: "abelian map",
                left: matrix.shape(),
                right: (target.generators, source.generators),
            });
        }
        let image_of_relations = matrix.try_mul(&source.relations)?;
        for c in 0..image_of_relations.cols() {
            let col = Matrix::column_vector(image_of_relations.col(c));
            if solve_integer(&target.relations, &col)?.is_none() {
                return Err(LinalgError::IncompatibleMap { relation: c });
            }
        }
        Ok(AbMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: FPAbelianGroup<R>) -> Self {
        let n = g.generators;
        AbMap {
            source: g.clone(),
            target: g,
            matrix: Matrix::identity(n),
        }
    }

    pub fn source(&self) -> &FPAbelianGroup<R> {
        &self.source
    }

    pub fn target(&self) -> &FPAbelianGroup<R> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }
}

/// Order of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupOrder<R> {
    Finite(R),
    Infinite,
}

impl<R: EuclideanRing> GroupOrder<R> {
    pub fn finite(&self) -> Option<&R> {
        match self {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupOrder::Finite(_))
    }
}

impl<R: fmt::Display> fmt::Display for GroupOrder<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// Order of ℤ^n / span(columns of `gens`).
fn order_of_quotient<R: EuclideanRing>(gens: &Matrix<R>, n: usize) -> GroupOrder<R> {
    let snf = smith_normal_form(gens);
    if snf.rank() < n {
        return GroupOrder::Infinite;
    }
    GroupOrder::Finite(
        snf.diag
            .iter()
            .filter(|d| !d.is_zero())
            .fold(R::one(), |acc, d| acc * d.clone()),
    )
}

/// Order of ker(f), "infinite" when the kernel has positive rank.
///
/// The kernel is `{x : M x ∈ span(R_t)} / span(R_s)`. The numerator lattice
/// is the projection of the integer kernel of `[M | -R_t]`; the order is the
/// index of `span(R_s)` inside it.
pub fn kernel_order<R: EuclideanRing>(f: &AbMap<R>) -> Result<GroupOrder<R>, LinalgError> {
    let ns = f.source.generators;
    if ns == 0 {
        return Ok(GroupOrder::Finite(R::one()));
    }
    let stacked = f.matrix.hstack(&-&f.target.relations)?;
    let k = integer_kernel(&stacked);
    let preimage = k.submatrix(0, 0, ns, k.cols());
    let basis = lattice_basis(&preimage);
    let coords = solve_integer(&basis, &f.source.relations)?
        .ok_or(LinalgError::IncompatibleMap { relation: 0 })?;
    Ok(order_of_quotient(&coords, basis.cols()))
}

/// Order of target / image(f), "infinite" when the cokernel has positive rank.
pub fn cokernel_order<R: EuclideanRing>(f: &AbMap<R>) -> Result<GroupOrder<R>, LinalgError> {
    let gens = f.matrix.hstack(&f.target.relations)?;
    Ok(order_of_quotient(&gens, f.target.generators))
}
