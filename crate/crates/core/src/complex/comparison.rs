use std::fmt;

use super::cochain::CochainComplex;
use super::kcomplex::{build_k, Bounds};
use super::ComplexError;
use crate::linalg::Matrix;
use crate::scalar::Field;
use crate::strata::FibreDescriptor;

/// `CH^c(Y^{(L)})` if the level exists and `c` is within its dimension.
fn space<F: Field>(f: &FibreDescriptor<F>, level: i64, codim: i64) -> usize {
    let n = f.dim_y() as i64;
    if level < 1 || level > n + 1 || codim < 0 || codim > n - level + 1 {
        return 0;
    }
    f.build_level(level as usize, codim as usize, 0).total()
}

/// Level and codimension of the spot `p` of `C(*)`.
fn spot(star: i64, p: i64) -> (i64, i64) {
    if p < star {
        (star - p, p)
    } else {
        (p - star + 1, star)
    }
}

/// The complex `C(*)` built from levels `≥ 1`:
///
/// ```text
/// CH^p(Y^{(*-p)})     for p ≤ * - 1,   d = -γ
///                     p = * - 1 → *,   d = -i^*i_*
/// CH^*(Y^{(p-*+1)})   for p ≥ *,       d = ρ
/// ```
pub fn build_c<F: Field>(
    f: &FibreDescriptor<F>,
    star: i64,
) -> Result<CochainComplex<F>, ComplexError> {
    let n = f.dim_y() as i64;
    let (lo, hi) = (star - n - 1, star + n);
    let dim = |p: i64| {
        let (l, c) = spot(star, p);
        space(f, l, c)
    };
    let dims: Vec<usize> = (lo..=hi).map(dim).collect();
    let mut diffs = Vec::new();
    for p in lo..hi {
        let (s, t) = (dim(p), dim(p + 1));
        let m = if s == 0 || t == 0 {
            Matrix::zeros(t, s)
        } else if p < star - 1 {
            -&f.gamma((star - p) as usize, p as usize, 0)?
        } else if p == star - 1 {
            -&f.ii(p as usize, 0)?
        } else {
            f.rho((p - star + 1) as usize, star as usize, 0)?
        };
        diffs.push(m);
    }
    CochainComplex::new(lo, dims, diffs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoRow {
    pub c_degree: i64,
    pub c_dim: usize,
    pub cone_dim: usize,
    pub equal: bool,
}

/// Cohomology of `Cone(N)` against `C(*)` after aligning degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub star: i64,
    pub cone_start: i64,
    pub cone_dims: Vec<usize>,
    pub cone_cohomology: Vec<usize>,
    pub c_start: i64,
    pub c_dims: Vec<usize>,
    pub c_cohomology: Vec<usize>,
    /// Cone degree minus `C` degree, from aligning the lowest nonzero spaces.
    pub shift: i64,
    /// Whether the comparison also holds with the shift `*`.
    pub canonical_agrees: bool,
    pub rows: Vec<QuasiIsoRow>,
}

impl QuasiIsoReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }

    /// Equality at the `C` degree `q`; degrees outside both windows are zero
    /// on both sides.
    pub fn equal_at(&self, q: i64) -> bool {
        self.rows
            .iter()
            .find(|r| r.c_degree == q)
            .is_none_or(|r| r.equal)
    }
}

impl fmt::Display for QuasiIsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |start: i64, v: &[usize]| {
            v.iter()
                .enumerate()
                .map(|(t, d)| format!("{}:{d}", start + t as i64))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "star {}", self.star)?;
        writeln!(
            f,
            "  cone spaces      [{}]",
            show(self.cone_start, &self.cone_dims)
        )?;
        writeln!(
            f,
            "  cone cohomology  [{}]",
            show(self.cone_start, &self.cone_cohomology)
        )?;
        writeln!(
            f,
            "  C spaces         [{}]",
            show(self.c_start, &self.c_dims)
        )?;
        writeln!(
            f,
            "  C cohomology     [{}]",
            show(self.c_start, &self.c_cohomology)
        )?;
        writeln!(
            f,
            "  alignment: cone degree = C degree + {} (canonical {}: {})",
            self.shift,
            self.star,
            if self.canonical_agrees {
                "agrees"
            } else {
                "differs"
            }
        )?;
        for r in &self.rows {
            let mark = if r.equal { "ok" } else { "MISMATCH" };
            writeln!(
                f,
                "  degree {:>3}: C {} cone {} {}",
                r.c_degree, r.c_dim, r.cone_dim, mark
            )?;
        }
        Ok(())
    }
}

fn compare(
    c: &CochainComplex<impl Field>,
    ch: &[usize],
    cone: &CochainComplex<impl Field>,
    coh: &[usize],
    shift: i64,
) -> Vec<QuasiIsoRow> {
    let at = |start: i64, v: &[usize], d: i64| {
        let t = d - start;
        if t < 0 {
            0
        } else {
            v.get(t as usize).copied().unwrap_or(0)
        }
    };
    let lo = c.start().min(cone.start() - shift);
    let hi = c.end().max(cone.end() - shift);
    (lo..hi)
        .map(|p| {
            let c_dim = at(c.start(), ch, p);
            let cone_dim = at(cone.start(), coh, p + shift);
            QuasiIsoRow {
                c_degree: p,
                c_dim,
                cone_dim,
                equal: c_dim == cone_dim,
            }
        })
        .filter(|r| r.c_dim > 0 || r.cone_dim > 0 || !r.equal)
        .collect()
}

pub fn check_quasi_iso<F: Field>(
    f: &FibreDescriptor<F>,
    bounds: Bounds,
    star: i64,
) -> Result<QuasiIsoReport, ComplexError> {
    let kc = build_k(f, bounds)?;
    let cone = kc.monodromy_cone(star)?;
    let cone = cone.complex();
    let c = build_c(f, star)?;
    let cone_h = cone.cohomology_dims();
    let c_h = c.cohomology_dims();
    let shift = match (cone.lowest_nonzero(), c.lowest_nonzero()) {
        (Some(a), Some(b)) => a - b,
        _ => star,
    };
    let rows = compare(&c, &c_h, cone, &cone_h, shift);
    let canonical_agrees = compare(&c, &c_h, cone, &cone_h, star)
        .iter()
        .all(|r| r.equal);
    Ok(QuasiIsoReport {
        star,
        cone_start: cone.start(),
        cone_dims: cone.dims().to_vec(),
        cone_cohomology: cone_h,
        c_start: c.start(),
        c_dims: c.dims().to_vec(),
        c_cohomology: c_h,
        shift,
        canonical_agrees,
        rows,
    })
}

/// The default window of `*`: `-1 ..= dim Y + 2`.
pub fn default_star_window<F: Field>(f: &FibreDescriptor<F>) -> std::ops::RangeInclusive<i64> {
    -1..=f.dim_y() as i64 + 2
}
