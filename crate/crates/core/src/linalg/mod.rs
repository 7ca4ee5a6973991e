//! Exact linear algebra over ℚ and ℤ: ranks, kernels, images, quotients,
//! Smith normal form, and kernel/cokernel orders of maps of finitely
//! presented abelian groups.

mod abelian;
mod exact;
mod matrix;
mod smith;

use thiserror::Error;

pub use abelian::{cokernel_order, kernel_order, AbMap, FPAbelianGroup, GroupOrder};
pub use exact::{
    determinant, image_basis, in_column_space, inverse, is_identity, kernel_basis, quotient_dim,
    rank, reduce_modulo, relative_rank, rref, solve,
};
pub use matrix::Matrix;
pub use smith::{
    divisibility_chain_holds, integer_kernel, lattice_basis, smith_normal_form, solve_integer,
    SmithForm,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix of shape {0:?} is not square")]
    NotSquare((usize, usize)),
    #[error("matrix is singular")]
    Singular,
    #[error("map does not respect relation {relation} of the source presentation")]
    IncompatibleMap { relation: usize },
}
