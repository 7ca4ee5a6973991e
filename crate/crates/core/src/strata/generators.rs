//! Built-in fibres: graphs of rational curves and smooth fibres.

use std::collections::{BTreeMap, BTreeSet};

use super::{ChowTable, FibreData, FibreDescriptor, StrataError, StratumIndex};
use crate::linalg::Matrix;
use crate::scalar::{from_int, Field};

/// A curve fibre whose components are rational curves meeting as the
/// multigraph `edges` on vertices `1..=m`.
///
/// `CH^0` and `CH^1` of each component are `ℚ`; the double stratum `Y_{ab}`
/// is a set of `mult(a, b)` points. The supplied `i^*i_*` is the
/// intersection matrix of the components.
pub fn generator_curve_graph<F: Field>(
    m: usize,
    edges: &[(usize, usize)],
    q_v: u64,
) -> Result<FibreDescriptor<F>, StrataError> {
    if m == 0 {
        return Err(StrataError::Generator(
            "a curve fibre needs at least one component".into(),
        ));
    }
    let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in edges {
        if a == 0 || b == 0 || a > m || b > m {
            return Err(StrataError::Generator(format!(
                "edge ({a}, {b}) is outside 1..={m}"
            )));
        }
        if a == b {
            return Err(StrataError::Generator(format!(
                "self-intersecting component {a}"
            )));
        }
        *mult.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    let mut strata = BTreeSet::new();
    let mut chow = ChowTable::new();
    for i in 1..=m {
        strata.insert(StratumIndex::single(i));
        chow.set(StratumIndex::single(i), 0, 0, 1);
        chow.set(StratumIndex::single(i), 1, 0, 1);
    }
    let mut pushforward = BTreeMap::new();
    let mut pullback = BTreeMap::new();
    let mut ii = Matrix::<F>::zeros(m, m);
    for (&(a, b), &k) in &mult {
        let s = StratumIndex::new(vec![a, b])?;
        strata.insert(s.clone());
        chow.set(s.clone(), 0, 0, k);
        for u in 1..=2 {
            pushforward.insert((s.clone(), u, 0, 0), Matrix::from_fn(1, k, |_, _| F::one()));
            pullback.insert((s.clone(), u, 0, 0), Matrix::from_fn(k, 1, |_, _| F::one()));
        }
        let kf: F = from_int(k as i64);
        ii.set(a - 1, b - 1, kf.clone());
        ii.set(b - 1, a - 1, kf.clone());
        for v in [a - 1, b - 1] {
            let d = ii.get(v, v).clone() - kf.clone();
            ii.set(v, v, d);
        }
    }
    let mut iis = BTreeMap::new();
    iis.insert((0, 0), ii);
    FibreDescriptor::new(FibreData {
        components: m,
        dim_y: 1,
        q_v,
        strata,
        chow,
        pushforward,
        pullback,
        ii: iis,
    })
}

/// A cycle of `n ≥ 2` rational curves (the split multiplicative fibre).
pub fn generator_ngon<F: Field>(n: usize, q_v: u64) -> Result<FibreDescriptor<F>, StrataError> {
    if n < 2 {
        return Err(StrataError::Generator(format!(
            "an n-gon needs n >= 2, got {n}"
        )));
    }
    let edges: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
    generator_curve_graph(n, &edges, q_v)
}

/// A single smooth component of dimension `dim_y` with Chow dimensions
/// `(p, j, dim)`.
pub fn generator_smooth<F: Field>(
    dim_y: usize,
    dims: &[(usize, usize, usize)],
    q_v: u64,
) -> Result<FibreDescriptor<F>, StrataError> {
    let y = StratumIndex::single(1);
    let mut chow = ChowTable::new();
    for &(p, j, d) in dims {
        if p > dim_y {
            return Err(StrataError::Generator(format!(
                "codimension {p} exceeds dim Y = {dim_y}"
            )));
        }
        chow.set(y.clone(), p, j, d);
    }
    FibreDescriptor::new(FibreData {
        components: 1,
        dim_y,
        q_v,
        strata: BTreeSet::from([y]),
        chow,
        pushforward: BTreeMap::new(),
        pullback: BTreeMap::new(),
        ii: BTreeMap::new(),
    })
}
