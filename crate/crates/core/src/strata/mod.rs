//! Combinatorial Chow data of a strictly semistable special fibre and the
//! global Gysin map `γ` and restriction map `ρ` assembled from it.
//!
//! A stratum `Y_I` is named by a sorted list of 1-based component indices.
//! `δ(u)` is the inclusion `Y_I → Y_{I∖i_u}` for the position `u` in `I`;
//! user matrices are unsigned and the sign `(-1)^{u-1}` is applied when the
//! level maps are assembled.

mod generators;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lfun::is_prime_power;
use crate::linalg::{inverse, LinalgError, Matrix};
use crate::scalar::Field;
use crate::Z;

pub use generators::{generator_curve_graph, generator_ngon, generator_smooth};
pub use validate::{validate, CheckKind, ValidationFailure, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("invalid stratum {stratum:?}: {reason}")]
    BadStratum { stratum: Vec<usize>, reason: String },
    #[error("strata are not downward closed: {stratum} is present but {missing} is not")]
    NotDownwardClosed {
        stratum: StratumIndex,
        missing: StratumIndex,
    },
    #[error("{context} refers to {stratum}, which is not a declared stratum")]
    UnknownStratum {
        context: &'static str,
        stratum: StratumIndex,
    },
    #[error("{kind} block for {stratum}: position u={u} is outside 1..={len}")]
    BadPosition {
        kind: MapKind,
        stratum: StratumIndex,
        u: usize,
        len: usize,
    },
    #[error(
        "{kind} block for {stratum}, u={u}, p={p}, j={j}: shape {found:?}, expected {expected:?}"
    )]
    BlockShape {
        kind: MapKind,
        stratum: StratumIndex,
        u: usize,
        p: usize,
        j: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("missing {kind} block for {stratum}, u={u}, p={p}, j={j}")]
    MissingBlock {
        kind: MapKind,
        stratum: StratumIndex,
        u: usize,
        p: usize,
        j: usize,
    },
    #[error("{op} is undefined at level {r}")]
    BadLevel { op: &'static str, r: usize },
    #[error("i*i_* matrix at p={p}, j={j}: shape {found:?}, expected {expected:?}")]
    IiShape {
        p: usize,
        j: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("presentation of CH^{p}({stratum}, {j}) has rank {found}, but the declared dimension is {expected}")]
    PresentationRank {
        stratum: StratumIndex,
        p: usize,
        j: usize,
        expected: usize,
        found: usize,
    },
    #[error("residue field size {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("basis change for CH^{p}({stratum}, {j}): {reason}")]
    BasisChange {
        stratum: StratumIndex,
        p: usize,
        j: usize,
        reason: String,
    },
    #[error("generator: {0}")]
    Generator(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapKind {
    Pushforward,
    Pullback,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Pushforward => "pushforward",
            MapKind::Pullback => "pullback",
        })
    }
}

/// A nonempty strictly increasing set of 1-based component indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StratumIndex(Vec<usize>);

impl StratumIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self, StrataError> {
        if indices.is_empty() {
            return Err(StrataError::BadStratum {
                stratum: indices,
                reason: "empty".into(),
            });
        }
        if indices.contains(&0) {
            return Err(StrataError::BadStratum {
                stratum: indices,
                reason: "indices are 1-based".into(),
            });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StrataError::BadStratum {
                stratum: indices,
                reason: "not strictly increasing".into(),
            });
        }
        Ok(StratumIndex(indices))
    }

    pub fn single(i: usize) -> Self {
        StratumIndex::new(vec![i]).expect("component index must be positive")
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// `|I|`, the level the stratum lives on.
    pub fn level(&self) -> usize {
        self.0.len()
    }

    /// `I ∖ {i_u}` for 1-based `u`; `None` for a singleton.
    pub fn remove_position(&self, u: usize) -> Option<StratumIndex> {
        if self.0.len() < 2 || u == 0 || u > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(u - 1);
        Some(StratumIndex(v))
    }
}

impl fmt::Display for StratumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `(I, p, j)` names the space `CH^p(Y_I, j) ⊗ ℚ`.
pub type ChowKey = (StratumIndex, usize, usize);

/// `(I, u, p, j)`: the block of `δ(u)` on `CH^p(Y_I, j)` (pushforward) or
/// into it (pullback).
pub type MapKey = (StratumIndex, usize, usize, usize);

/// Dimensions of the Chow spaces of the strata; absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChowTable {
    dims: BTreeMap<ChowKey, usize>,
    presentations: BTreeMap<ChowKey, crate::linalg::FPAbelianGroup<Z>>,
}

impl ChowTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, stratum: StratumIndex, p: usize, j: usize, dim: usize) {
        self.dims.insert((stratum, p, j), dim);
    }

    /// Attach a ℤ-presentation; its free rank must match the dimension.
    pub fn set_presentation(
        &mut self,
        stratum: StratumIndex,
        p: usize,
        j: usize,
        group: crate::linalg::FPAbelianGroup<Z>,
    ) -> Result<(), StrataError> {
        let rel_rank = crate::linalg::smith_normal_form(group.relations()).rank();
        let found = group.generators() - rel_rank;
        let expected = self.dim(&stratum, p, j);
        if found != expected {
            return Err(StrataError::PresentationRank {
                stratum,
                p,
                j,
                expected,
                found,
            });
        }
        self.presentations.insert((stratum, p, j), group);
        Ok(())
    }

    pub fn dim(&self, stratum: &StratumIndex, p: usize, j: usize) -> usize {
        self.dims
            .get(&(stratum.clone(), p, j))
            .copied()
            .unwrap_or(0)
    }

    pub fn presentation(
        &self,
        stratum: &StratumIndex,
        p: usize,
        j: usize,
    ) -> Option<&crate::linalg::FPAbelianGroup<Z>> {
        self.presentations.get(&(stratum.clone(), p, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ChowKey, &usize)> {
        self.dims.iter()
    }

    pub fn presentations(
        &self,
    ) -> impl Iterator<Item = (&ChowKey, &crate::linalg::FPAbelianGroup<Z>)> {
        self.presentations.iter()
    }

    /// Higher indices that occur, always including 0.
    pub fn higher_indices(&self) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = self.dims.keys().map(|k| k.2).collect();
        s.insert(0);
        s
    }

    pub fn max_codim(&self) -> usize {
        self.dims.keys().map(|k| k.1).max().unwrap_or(0)
    }
}

/// `CH^p(Y^{(r)}, j)` as an ordered direct sum over the strata of level `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    summands: Vec<(StratumIndex, usize)>,
    total: usize,
}

impl GradedSpace {
    pub fn summands(&self) -> &[(StratumIndex, usize)] {
        &self.summands
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Offset of a summand's block, if the stratum is on this level.
    pub fn offset(&self, stratum: &StratumIndex) -> Option<usize> {
        let mut off = 0;
        for (s, d) in &self.summands {
            if s == stratum {
                return Some(off);
            }
            off += d;
        }
        None
    }
}

/// The combinatorial special fibre with its Chow data.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreDescriptor<F> {
    components: usize,
    dim_y: usize,
    q_v: u64,
    strata: BTreeSet<StratumIndex>,
    chow: ChowTable,
    pushforward: BTreeMap<MapKey, Matrix<F>>,
    pullback: BTreeMap<MapKey, Matrix<F>>,
    ii: BTreeMap<(usize, usize), Matrix<F>>,
}

/// Everything needed to build a [`FibreDescriptor`].
#[derive(Clone, Debug, PartialEq)]
pub struct FibreData<F> {
    pub components: usize,
    pub dim_y: usize,
    pub q_v: u64,
    pub strata: BTreeSet<StratumIndex>,
    pub chow: ChowTable,
    pub pushforward: BTreeMap<MapKey, Matrix<F>>,
    pub pullback: BTreeMap<MapKey, Matrix<F>>,
    pub ii: BTreeMap<(usize, usize), Matrix<F>>,
}

impl<F: Field> FibreDescriptor<F> {
    /// Checks structure and shapes. The identities `γ² = ρ² = γρ + ργ = 0`
    /// are left to [`validate`], so inconsistent data can still be inspected.
    pub fn new(data: FibreData<F>) -> Result<Self, StrataError> {
        let FibreData {
            components,
            dim_y,
            q_v,
            strata,
            chow,
            pushforward,
            pullback,
            ii,
        } = data;
        if !is_prime_power(q_v) {
            return Err(StrataError::NotPrimePower(q_v));
        }
        for s in &strata {
            if let Some(&bad) = s.indices().iter().find(|&&i| i > components) {
                return Err(StrataError::BadStratum {
                    stratum: s.indices().to_vec(),
                    reason: format!("component {bad} exceeds the component count {components}"),
                });
            }
            if s.level() > dim_y + 1 {
                return Err(StrataError::BadStratum {
                    stratum: s.indices().to_vec(),
                    reason: format!("more than dim Y + 1 = {} components meet", dim_y + 1),
                });
            }
            for u in 1..=s.level() {
                if let Some(face) = s.remove_position(u) {
                    if !strata.contains(&face) {
                        return Err(StrataError::NotDownwardClosed {
                            stratum: s.clone(),
                            missing: face,
                        });
                    }
                }
            }
        }
        for ((s, _, _), _) in chow.entries() {
            if !strata.contains(s) {
                return Err(StrataError::UnknownStratum {
                    context: "chow table",
                    stratum: s.clone(),
                });
            }
        }
        let f = FibreDescriptor {
            components,
            dim_y,
            q_v,
            strata,
            chow,
            pushforward,
            pullback,
            ii,
        };
        for (kind, blocks) in [
            (MapKind::Pushforward, &f.pushforward),
            (MapKind::Pullback, &f.pullback),
        ] {
            for ((s, u, p, j), m) in blocks {
                let (u, p, j) = (*u, *p, *j);
                if !f.strata.contains(s) {
                    return Err(StrataError::UnknownStratum {
                        context: "map block",
                        stratum: s.clone(),
                    });
                }
                let Some(face) = s.remove_position(u) else {
                    return Err(StrataError::BadPosition {
                        kind,
                        stratum: s.clone(),
                        u,
                        len: s.level(),
                    });
                };
                let expected = match kind {
                    MapKind::Pushforward => (f.chow.dim(&face, p + 1, j), f.chow.dim(s, p, j)),
                    MapKind::Pullback => (f.chow.dim(s, p, j), f.chow.dim(&face, p, j)),
                };
                if m.shape() != expected {
                    return Err(StrataError::BlockShape {
                        kind,
                        stratum: s.clone(),
                        u,
                        p,
                        j,
                        expected,
                        found: m.shape(),
                    });
                }
            }
        }
        for (&(p, j), m) in &f.ii {
            let expected = (
                f.build_level(1, p + 1, j).total(),
                f.build_level(1, p, j).total(),
            );
            if m.shape() != expected {
                return Err(StrataError::IiShape {
                    p,
                    j,
                    expected,
                    found: m.shape(),
                });
            }
        }
        Ok(f)
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn q_v(&self) -> u64 {
        self.q_v
    }

    pub fn strata(&self) -> &BTreeSet<StratumIndex> {
        &self.strata
    }

    pub fn chow(&self) -> &ChowTable {
        &self.chow
    }

    pub fn pushforward_blocks(&self) -> &BTreeMap<MapKey, Matrix<F>> {
        &self.pushforward
    }

    pub fn pullback_blocks(&self) -> &BTreeMap<MapKey, Matrix<F>> {
        &self.pullback
    }

    pub fn ii_matrices(&self) -> &BTreeMap<(usize, usize), Matrix<F>> {
        &self.ii
    }

    /// Strata with `|I| = r`, in lexicographic order.
    pub fn level_strata(&self, r: usize) -> impl Iterator<Item = &StratumIndex> {
        self.strata.iter().filter(move |s| s.level() == r)
    }

    pub fn build_level(&self, r: usize, p: usize, j: usize) -> GradedSpace {
        let summands: Vec<(StratumIndex, usize)> = self
            .level_strata(r)
            .map(|s| (s.clone(), self.chow.dim(s, p, j)))
            .collect();
        let total = summands.iter().map(|(_, d)| d).sum();
        GradedSpace { summands, total }
    }

    fn block(
        &self,
        kind: MapKind,
        s: &StratumIndex,
        u: usize,
        p: usize,
        j: usize,
        shape: (usize, usize),
    ) -> Result<Option<&Matrix<F>>, StrataError> {
        let table = match kind {
            MapKind::Pushforward => &self.pushforward,
            MapKind::Pullback => &self.pullback,
        };
        match table.get(&(s.clone(), u, p, j)) {
            Some(m) => Ok(Some(m)),
            None if shape.0 == 0 || shape.1 == 0 => Ok(None),
            None => Err(StrataError::MissingBlock {
                kind,
                stratum: s.clone(),
                u,
                p,
                j,
            }),
        }
    }

    /// `γ = Σ (-1)^{u-1} δ(u)_*` from level `r`, codim `p` to level `r-1`, codim `p+1`.
    pub fn gamma(&self, r: usize, p: usize, j: usize) -> Result<Matrix<F>, StrataError> {
        if r < 2 {
            return Err(StrataError::BadLevel { op: "gamma", r });
        }
        let src = self.build_level(r, p, j);
        let tgt = self.build_level(r - 1, p + 1, j);
        let mut out = Matrix::zeros(tgt.total, src.total);
        let mut col = 0;
        for (s, d) in &src.summands {
            for u in 1..=r {
                let face = s.remove_position(u).expect("level at least 2");
                let shape = (self.chow.dim(&face, p + 1, j), *d);
                if let Some(m) = self.block(MapKind::Pushforward, s, u, p, j, shape)? {
                    let row = tgt
                        .offset(&face)
                        .expect("faces of declared strata are declared");
                    let m = if u % 2 == 0 { -m } else { m.clone() };
                    out.set_block(row, col, &m);
                }
            }
            col += d;
        }
        Ok(out)
    }

    /// `ρ = Σ (-1)^{u-1} δ(u)^*` from level `r` to level `r+1`, same codim.
    pub fn rho(&self, r: usize, p: usize, j: usize) -> Result<Matrix<F>, StrataError> {
        if r < 1 {
            return Err(StrataError::BadLevel { op: "rho", r });
        }
        let src = self.build_level(r, p, j);
        let tgt = self.build_level(r + 1, p, j);
        let mut out = Matrix::zeros(tgt.total, src.total);
        let mut row = 0;
        for (s, d) in &tgt.summands {
            for u in 1..=r + 1 {
                let face = s.remove_position(u).expect("level at least 2");
                let shape = (*d, self.chow.dim(&face, p, j));
                if let Some(m) = self.block(MapKind::Pullback, s, u, p, j, shape)? {
                    let col = src
                        .offset(&face)
                        .expect("faces of declared strata are declared");
                    let m = if u % 2 == 0 { -m } else { m.clone() };
                    out.set_block(row, col, &m);
                }
            }
            row += d;
        }
        Ok(out)
    }

    /// `γ(2, p) ∘ ρ(1, p)` on `CH^p(Y^{(1)}, j)`.
    pub fn gamma_rho(&self, p: usize, j: usize) -> Result<Matrix<F>, StrataError> {
        Ok(&self.gamma(2, p, j)? * &self.rho(1, p, j)?)
    }

    /// `ρ(1, p+1) ∘ γ(2, p)` on `CH^p(Y^{(2)}, j)`.
    pub fn rho_gamma(&self, p: usize, j: usize) -> Result<Matrix<F>, StrataError> {
        Ok(&self.rho(1, p + 1, j)? * &self.gamma(2, p, j)?)
    }

    /// `i^*i_* : CH^p(Y^{(1)}, j) → CH^{p+1}(Y^{(1)}, j)`.
    ///
    /// Uses the supplied matrix when there is one. Otherwise it is
    /// `-γ(2,p)ρ(1,p)`: on a component `Y_i` the self-intersection
    /// `Y_i|_{Y_i} = -Σ_{k≠i} Y_{ik}` because `Y = Σ Y_k` is a principal divisor.
    pub fn ii(&self, p: usize, j: usize) -> Result<Matrix<F>, StrataError> {
        match self.ii.get(&(p, j)) {
            Some(m) => Ok(m.clone()),
            None => Ok(-&self.gamma_rho(p, j)?),
        }
    }

    pub fn has_explicit_ii(&self, p: usize, j: usize) -> bool {
        self.ii.contains_key(&(p, j))
    }

    /// The same fibre in new bases: `bases[(I, p, j)]` is the invertible
    /// matrix taking old coordinates of `CH^p(Y_I, j)` to new ones. Spaces
    /// without an entry keep their basis.
    pub fn with_basis_change(
        &self,
        bases: &BTreeMap<ChowKey, Matrix<F>>,
    ) -> Result<Self, StrataError> {
        let mut inv = BTreeMap::new();
        for ((s, p, j), b) in bases {
            let d = self.chow.dim(s, *p, *j);
            if b.shape() != (d, d) {
                return Err(StrataError::BasisChange {
                    stratum: s.clone(),
                    p: *p,
                    j: *j,
                    reason: format!("shape {:?}, expected {:?}", b.shape(), (d, d)),
                });
            }
            let bi = inverse(b).map_err(|e| StrataError::BasisChange {
                stratum: s.clone(),
                p: *p,
                j: *j,
                reason: e.to_string(),
            })?;
            inv.insert((s.clone(), *p, *j), bi);
        }
        let fwd = |s: &StratumIndex, p: usize, j: usize, m: Matrix<F>| match bases.get(&(
            s.clone(),
            p,
            j,
        )) {
            Some(b) => b * &m,
            None => m,
        };
        let back = |s: &StratumIndex, p: usize, j: usize, m: Matrix<F>| match inv.get(&(
            s.clone(),
            p,
            j,
        )) {
            Some(b) => &m * b,
            None => m,
        };
        let mut out = self.clone();
        for ((s, u, p, j), m) in out.pushforward.iter_mut() {
            let face = s.remove_position(*u).expect("validated position");
            *m = fwd(&face, p + 1, *j, back(s, *p, *j, m.clone()));
        }
        for ((s, u, p, j), m) in out.pullback.iter_mut() {
            let face = s.remove_position(*u).expect("validated position");
            *m = fwd(s, *p, *j, back(&face, *p, *j, m.clone()));
        }
        for (&(p, j), m) in out.ii.iter_mut() {
            let level_change = |q: usize, invert: bool| {
                let space = self.build_level(1, q, j);
                let mut blocks = Matrix::identity(space.total());
                let mut off = 0;
                for (s, d) in space.summands() {
                    let table = if invert { &inv } else { bases };
                    if let Some(b) = table.get(&(s.clone(), q, j)) {
                        blocks.set_block(off, off, b);
                    }
                    off += d;
                }
                blocks
            };
            *m = &(&level_change(p + 1, false) * m) * &level_change(p, true);
        }
        Ok(out)
    }

    /// The raw data, e.g. for editing and rebuilding.
    pub fn to_data(&self) -> FibreData<F> {
        FibreData {
            components: self.components,
            dim_y: self.dim_y,
            q_v: self.q_v,
            strata: self.strata.clone(),
            chow: self.chow.clone(),
            pushforward: self.pushforward.clone(),
            pullback: self.pullback.clone(),
            ii: self.ii.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kernel_basis, rank};
    use crate::{RatMatrix, Q};

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn st(v: &[usize]) -> StratumIndex {
        StratumIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn stratum_index_rules() {
        assert!(StratumIndex::new(vec![]).is_err());
        assert!(StratumIndex::new(vec![2, 1]).is_err());
        assert!(StratumIndex::new(vec![0, 1]).is_err());
        assert_eq!(st(&[1, 3, 4]).remove_position(2), Some(st(&[1, 4])));
        assert_eq!(st(&[2]).remove_position(1), None);
        assert_eq!(st(&[1, 3]).to_string(), "{1,3}");
    }

    #[test]
    fn triangle_levels_and_maps() {
        let f = generator_ngon::<Q>(3, 5).unwrap();
        assert_eq!(f.build_level(2, 0, 0).total(), 3);
        assert_eq!(f.build_level(1, 1, 0).total(), 3);
        assert_eq!(f.build_level(3, 0, 0).total(), 0);
        let g = f.gamma(2, 0, 0).unwrap();
        // nodes {1,2},{1,3},{2,3} ↦ e2-e1, e3-e1, e3-e2
        let expected = RatMatrix::from_rows(
            vec![
                vec![q(-1), q(-1), q(0)],
                vec![q(1), q(0), q(-1)],
                vec![q(0), q(1), q(1)],
            ],
            3,
        )
        .unwrap();
        assert_eq!(g, expected);
        assert_eq!(rank(&g), 2);
        assert_eq!(f.rho(1, 0, 0).unwrap(), expected.transpose());
        assert!(validate(&f).passes());
    }

    #[test]
    fn chain_of_two_lines() {
        let f = generator_curve_graph::<Q>(2, &[(1, 2)], 3).unwrap();
        let g = f.gamma(2, 0, 0).unwrap();
        assert_eq!(
            g,
            RatMatrix::from_rows(vec![vec![q(-1)], vec![q(1)]], 1).unwrap()
        );
        assert_eq!(f.rho(1, 0, 0).unwrap(), g.transpose());
    }

    #[test]
    fn ngon_graph_invariants() {
        for n in 2..=7 {
            let f = generator_ngon::<Q>(n, 2).unwrap();
            assert_eq!(rank(&f.gamma(2, 0, 0).unwrap()), n - 1);
            assert_eq!(kernel_basis(&f.rho(1, 0, 0).unwrap()).cols(), 1);
            // explicit intersection matrix agrees with the composed form
            assert_eq!(f.ii(0, 0).unwrap(), -&f.gamma_rho(0, 0).unwrap());
            assert!(validate(&f).passes());
        }
    }

    #[test]
    fn smooth_fibres_have_no_maps() {
        let f = generator_smooth::<Q>(1, &[(0, 0, 1), (1, 0, 1)], 7).unwrap();
        assert_eq!(f.gamma(2, 0, 0).unwrap().shape(), (1, 0));
        assert_eq!(f.rho(1, 0, 0).unwrap().shape(), (0, 1));
        assert!(validate(&f).passes());
        assert!(validate(&generator_smooth::<Q>(0, &[], 7).unwrap()).passes());
        assert!(validate(&generator_smooth::<Q>(1, &[(0, 0, 2)], 7).unwrap()).passes());
    }

    #[test]
    fn structural_errors() {
        let mut d = generator_ngon::<Q>(3, 2).unwrap().to_data();
        d.strata.remove(&st(&[2]));
        assert!(matches!(
            FibreDescriptor::new(d).unwrap_err(),
            StrataError::NotDownwardClosed { .. }
        ));

        let mut d = generator_ngon::<Q>(3, 2).unwrap().to_data();
        d.pushforward
            .insert((st(&[1, 2]), 1, 0, 0), RatMatrix::zeros(2, 1));
        assert!(matches!(
            FibreDescriptor::new(d).unwrap_err(),
            StrataError::BlockShape { .. }
        ));

        let mut d = generator_ngon::<Q>(3, 2).unwrap().to_data();
        d.pushforward.remove(&(st(&[1, 3]), 2, 0, 0));
        let f = FibreDescriptor::new(d).unwrap();
        match f.gamma(2, 0, 0).unwrap_err() {
            StrataError::MissingBlock { stratum, u, .. } => {
                assert_eq!(stratum, st(&[1, 3]));
                assert_eq!(u, 2);
            }
            e => panic!("unexpected {e}"),
        }

        let mut d = generator_ngon::<Q>(3, 2).unwrap().to_data();
        d.q_v = 6;
        assert_eq!(
            FibreDescriptor::new(d).unwrap_err(),
            StrataError::NotPrimePower(6)
        );
    }

    #[test]
    fn sign_flip_breaks_anticommutation() {
        let mut d = generator_ngon::<Q>(3, 2).unwrap().to_data();
        let key = (st(&[1, 2]), 2, 0, 0);
        let m = -&d.pushforward[&key];
        d.pushforward.insert(key, m);
        let f = FibreDescriptor::new(d).unwrap();
        let report = validate(&f);
        assert!(!report.passes());
        assert!(report
            .failures()
            .iter()
            .all(|x| x.check == CheckKind::Anticommute));
    }

    #[test]
    fn basis_change_preserves_validity() {
        let f = generator_ngon::<Q>(2, 3).unwrap();
        let mut bases = BTreeMap::new();
        bases.insert(
            (st(&[1, 2]), 0, 0),
            RatMatrix::from_rows(vec![vec![q(1), q(2)], vec![q(0), q(1)]], 2).unwrap(),
        );
        bases.insert(
            (st(&[1]), 1, 0),
            RatMatrix::from_rows(vec![vec![q(3)]], 1).unwrap(),
        );
        let g = f.with_basis_change(&bases).unwrap();
        assert_ne!(g, f);
        assert!(validate(&g).passes());
        assert_eq!(rank(&g.gamma(2, 0, 0).unwrap()), 1);
    }
}
