//! Cochain complexes over ℚ, the monodromy complex `K^{i,j,k}` of a fibre,
//! the cone of its monodromy operator and the comparison complex `C(*)`.

mod cochain;
mod comparison;
mod kcomplex;

use thiserror::Error;

pub use cochain::{cone, CochainComplex, ConeComplex};
pub use comparison::{build_c, check_quasi_iso, default_star_window, QuasiIsoReport, QuasiIsoRow};
pub use kcomplex::{build_k, Bounds, KComplex, Slot, TriDegree};

use crate::linalg::LinalgError;
use crate::strata::StrataError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("{dims} spaces need {} differentials, got {diffs}", dims.saturating_sub(1))]
    Window { dims: usize, diffs: usize },
    #[error("differential from degree {degree}: shape {found:?}, expected {expected:?}")]
    Shape {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("d∘d ≠ 0 from degree {degree}: entry ({}, {}) = {}", witness.0, witness.1, witness.2)]
    NotAComplex {
        degree: i64,
        witness: (usize, usize, String),
    },
    #[error("fibre data gives ∂∘∂ ≠ 0 on K^({i}, {j}): entry ({}, {}) = {}", witness.0, witness.1, witness.2)]
    DataNotAComplex {
        i: i64,
        j: i64,
        witness: (usize, usize, String),
    },
    #[error("map does not commute with the differentials at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("degree {degree} is outside the bounds {bounds:?}")]
    OutOfBounds { degree: TriDegree, bounds: Bounds },
    #[error("bounds {bounds:?} do not contain the support {support:?}")]
    BoundsTooSmall { bounds: Bounds, support: Bounds },
    #[error("window {lo}..{hi} would drop a nonzero space")]
    Truncation { lo: i64, hi: i64 },
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::strata::{generator_curve_graph, generator_ngon, generator_smooth};
    use crate::{RatMatrix, Q};

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn simple_cohomology() {
        assert_eq!(
            CochainComplex::<Q>::new(0, vec![0, 0], vec![RatMatrix::zeros(0, 0)])
                .unwrap()
                .cohomology_dims(),
            vec![0, 0]
        );
        let id = CochainComplex::new(0, vec![1, 1], vec![RatMatrix::identity(1)]).unwrap();
        assert_eq!(id.cohomology_dims(), vec![0, 0]);
        let bad = CochainComplex::new(
            0,
            vec![1, 1, 1],
            vec![RatMatrix::identity(1), RatMatrix::identity(1)],
        );
        assert!(matches!(
            bad,
            Err(ComplexError::NotAComplex { degree: 0, .. })
        ));
    }

    #[test]
    fn dual_graph_of_triangle() {
        let f = generator_ngon::<Q>(3, 2).unwrap();
        let c = CochainComplex::new(0, vec![3, 3], vec![f.rho(1, 0, 0).unwrap()]).unwrap();
        assert_eq!(c.cohomology_dims(), vec![1, 1]);
    }

    #[test]
    fn triangle_pieces() {
        let f = generator_ngon::<Q>(3, 2).unwrap();
        let kc = build_k(&f, Bounds::default_for(1)).unwrap();
        assert_eq!(kc.piece_dim(TriDegree::new(0, 1, 0)).unwrap(), 3);
        assert_eq!(
            kc.slot(TriDegree::new(0, 1, 0)),
            Some(Slot { level: 1, codim: 1 })
        );
        assert_eq!(kc.piece_dim(TriDegree::new(1, 0, 1)).unwrap(), 3);
        assert_eq!(kc.piece_dim(TriDegree::new(1, 0, 0)).unwrap(), 0);
        assert_eq!(kc.d_prime(TriDegree::new(0, 1, 0)).unwrap().shape(), (0, 3));
        assert_eq!(
            kc.d_prime(TriDegree::new(0, -1, 0)).unwrap(),
            f.rho(1, 0, 0).unwrap()
        );
        assert_eq!(
            kc.n_op(TriDegree::new(-1, 0, 0)).unwrap(),
            Matrix::identity(kc.piece_dim(TriDegree::new(-1, 0, 0)).unwrap())
        );
        assert!(kc.d_prime(TriDegree::new(3, 3, 3)).is_err());
        assert!(build_k(
            &f,
            Bounds {
                i: (-1, 1),
                j: (-1, 1),
                k: (0, 0)
            }
        )
        .is_err());
    }

    #[test]
    fn smooth_quasi_iso() {
        let f = generator_smooth::<Q>(1, &[(0, 0, 1), (1, 0, 1)], 5).unwrap();
        for star in default_star_window(&f) {
            let r = check_quasi_iso(&f, Bounds::default_for(1), star).unwrap();
            assert!(r.all_equal(), "{r}");
            assert!(r.canonical_agrees, "{r}");
        }
    }

    #[test]
    fn ngon_quasi_iso() {
        for n in 2..=6 {
            let f = generator_ngon::<Q>(n, 3).unwrap();
            for star in default_star_window(&f) {
                let r = check_quasi_iso(&f, Bounds::default_for(1), star).unwrap();
                assert!(r.all_equal(), "n={n} {r}");
                assert!(r.canonical_agrees, "n={n} {r}");
            }
        }
    }

    #[test]
    fn chain_quasi_iso() {
        let f =
            generator_curve_graph::<Q>(4, &[(1, 2), (2, 3), (2, 4), (3, 4), (3, 4)], 2).unwrap();
        for star in default_star_window(&f) {
            let r = check_quasi_iso(&f, Bounds::default_for(1), star).unwrap();
            assert!(r.all_equal(), "{r}");
        }
    }

    #[test]
    fn cones() {
        let a = CochainComplex::new(
            0,
            vec![1, 2],
            vec![RatMatrix::from_rows(vec![vec![q(1)], vec![q(0)]], 1).unwrap()],
        )
        .unwrap();
        let id = cone(&a, &a, |d| Matrix::identity(a.dim(d))).unwrap();
        assert!(id.complex().cohomology_dims().iter().all(|&h| h == 0));
        let z = cone(&a, &a, |d| Matrix::zeros(a.dim(d), a.dim(d))).unwrap();
        // H^Q(cone) = H^Q(A) ⊕ H^{Q-1}(A)
        assert_eq!(z.complex().cohomology_dims(), vec![0, 1, 1]);
    }
}
