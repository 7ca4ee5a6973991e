use std::fmt;

use super::cochain::{cone, CochainComplex, ConeComplex};
use super::ComplexError;
use crate::linalg::Matrix;
use crate::scalar::Field;
use crate::strata::FibreDescriptor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriDegree {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl TriDegree {
    pub fn new(i: i64, j: i64, k: i64) -> Self {
        TriDegree { i, j, k }
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.k)
    }
}

/// Inclusive ranges for `i`, `j`, `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub i: (i64, i64),
    pub j: (i64, i64),
    pub k: (i64, i64),
}

impl Bounds {
    /// `|i|, |j|, |k| ≤ n + 2`.
    pub fn default_for(n: usize) -> Self {
        let b = n as i64 + 2;
        Bounds {
            i: (-b, b),
            j: (-b, b),
            k: (-b, b),
        }
    }

    pub fn contains(&self, t: TriDegree) -> bool {
        let within = |x: i64, (lo, hi): (i64, i64)| lo <= x && x <= hi;
        within(t.i, self.i) && within(t.j, self.j) && within(t.k, self.k)
    }
}

/// Where a nonzero piece can live: `|i|, |j| ≤ n`, `0 ≤ k ≤ n`.
fn support(n: usize) -> Bounds {
    let n = n as i64;
    Bounds {
        i: (-n, n),
        j: (-n, n),
        k: (0, n),
    }
}

/// The tri-graded complex `K^{i,j,k} = CH^c(Y^{(L)})` with
/// `L = 2k - i + 1`, `c = (i + j - 2k + n)/2`, for `k ≥ max(0, i)`.
#[derive(Clone, Debug)]
pub struct KComplex<F> {
    fibre: FibreDescriptor<F>,
    bounds: Bounds,
}

/// Level and codimension of a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub level: usize,
    pub codim: usize,
}

pub fn build_k<F: Field>(
    fibre: &FibreDescriptor<F>,
    bounds: Bounds,
) -> Result<KComplex<F>, ComplexError> {
    let s = support(fibre.dim_y());
    let covers = |(lo, hi): (i64, i64), (slo, shi): (i64, i64)| lo <= slo && shi <= hi;
    if !(covers(bounds.i, s.i) && covers(bounds.j, s.j) && covers(bounds.k, s.k)) {
        return Err(ComplexError::BoundsTooSmall { bounds, support: s });
    }
    Ok(KComplex {
        fibre: fibre.clone(),
        bounds,
    })
}

impl<F: Field> KComplex<F> {
    pub fn fibre(&self) -> &FibreDescriptor<F> {
        &self.fibre
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    fn n(&self) -> i64 {
        self.fibre.dim_y() as i64
    }

    /// The Chow space behind `K^{i,j,k}`, or `None` when the piece is zero
    /// by parity, the side condition or range.
    pub fn slot(&self, t: TriDegree) -> Option<Slot> {
        let n = self.n();
        if t.k < t.i.max(0) {
            return None;
        }
        let level = 2 * t.k - t.i + 1;
        let twice_codim = t.i + t.j - 2 * t.k + n;
        if level < 1 || level > n + 1 || twice_codim < 0 || twice_codim % 2 != 0 {
            return None;
        }
        let codim = twice_codim / 2;
        // a level-L stratum has dimension n - L + 1
        if codim > n - level + 1 {
            return None;
        }
        Some(Slot {
            level: level as usize,
            codim: codim as usize,
        })
    }

    fn check(&self, t: TriDegree) -> Result<(), ComplexError> {
        if self.bounds.contains(t) {
            Ok(())
        } else {
            Err(ComplexError::OutOfBounds {
                degree: t,
                bounds: self.bounds,
            })
        }
    }

    pub fn piece_dim(&self, t: TriDegree) -> Result<usize, ComplexError> {
        self.check(t)?;
        Ok(self.dim_unchecked(t))
    }

    fn dim_unchecked(&self, t: TriDegree) -> usize {
        self.slot(t)
            .map_or(0, |s| self.fibre.build_level(s.level, s.codim, 0).total())
    }

    /// `∂' = ρ : K^{i,j,k} → K^{i+1,j+1,k+1}`.
    pub fn d_prime(&self, at: TriDegree) -> Result<Matrix<F>, ComplexError> {
        let to = TriDegree::new(at.i + 1, at.j + 1, at.k + 1);
        self.check(at)?;
        self.check(to)?;
        self.d_prime_unchecked(at)
    }

    fn d_prime_unchecked(&self, at: TriDegree) -> Result<Matrix<F>, ComplexError> {
        let to = TriDegree::new(at.i + 1, at.j + 1, at.k + 1);
        match (self.slot(at), self.slot(to)) {
            (Some(s), Some(_)) => Ok(self.fibre.rho(s.level, s.codim, 0)?),
            _ => Ok(Matrix::zeros(
                self.dim_unchecked(to),
                self.dim_unchecked(at),
            )),
        }
    }

    /// `∂'' = -γ : K^{i,j,k} → K^{i+1,j+1,k}`.
    pub fn d_doubleprime(&self, at: TriDegree) -> Result<Matrix<F>, ComplexError> {
        let to = TriDegree::new(at.i + 1, at.j + 1, at.k);
        self.check(at)?;
        self.check(to)?;
        self.d_doubleprime_unchecked(at)
    }

    fn d_doubleprime_unchecked(&self, at: TriDegree) -> Result<Matrix<F>, ComplexError> {
        let to = TriDegree::new(at.i + 1, at.j + 1, at.k);
        match (self.slot(at), self.slot(to)) {
            (Some(s), Some(_)) => Ok(-&self.fibre.gamma(s.level, s.codim, 0)?),
            _ => Ok(Matrix::zeros(
                self.dim_unchecked(to),
                self.dim_unchecked(at),
            )),
        }
    }

    /// `N = id : K^{i,j,k} → K^{i+2,j,k+1}(-1)`; the twist does not change
    /// the matrix.
    pub fn n_op(&self, at: TriDegree) -> Result<Matrix<F>, ComplexError> {
        let to = TriDegree::new(at.i + 2, at.j, at.k + 1);
        self.check(at)?;
        self.check(to)?;
        Ok(self.n_unchecked(at))
    }

    fn n_unchecked(&self, at: TriDegree) -> Matrix<F> {
        let to = TriDegree::new(at.i + 2, at.j, at.k + 1);
        match (self.slot(at), self.slot(to)) {
            (Some(_), Some(_)) => Matrix::identity(self.dim_unchecked(at)),
            _ => Matrix::zeros(self.dim_unchecked(to), self.dim_unchecked(at)),
        }
    }

    fn k_range(&self) -> std::ops::RangeInclusive<i64> {
        self.bounds.k.0..=self.bounds.k.1
    }

    /// `dim K^{i,j} = Σ_k dim K^{i,j,k}`.
    pub fn bigraded_dim(&self, i: i64, j: i64) -> usize {
        self.k_range()
            .map(|k| self.dim_unchecked(TriDegree::new(i, j, k)))
            .sum()
    }

    /// `∂ = ∂' + ∂'' : K^{i,j} → K^{i+1,j+1}`, blocks ordered by `k`.
    pub fn total_differential(&self, i: i64, j: i64) -> Result<Matrix<F>, ComplexError> {
        let ks: Vec<i64> = self.k_range().collect();
        let src: Vec<usize> = ks
            .iter()
            .map(|&k| self.dim_unchecked(TriDegree::new(i, j, k)))
            .collect();
        let tgt: Vec<usize> = ks
            .iter()
            .map(|&k| self.dim_unchecked(TriDegree::new(i + 1, j + 1, k)))
            .collect();
        let offsets = |v: &[usize]| {
            v.iter()
                .scan(0, |acc, &d| {
                    let o = *acc;
                    *acc += d;
                    Some(o)
                })
                .collect::<Vec<_>>()
        };
        let (so, to) = (offsets(&src), offsets(&tgt));
        let mut m = Matrix::zeros(tgt.iter().sum(), src.iter().sum());
        for (x, &k) in ks.iter().enumerate() {
            let at = TriDegree::new(i, j, k);
            if src[x] == 0 {
                continue;
            }
            if tgt[x] > 0 {
                m.set_block(to[x], so[x], &self.d_doubleprime_unchecked(at)?);
            }
            if x + 1 < ks.len() && tgt[x + 1] > 0 {
                m.set_block(to[x + 1], so[x], &self.d_prime_unchecked(at)?);
            }
        }
        Ok(m)
    }

    /// `N : K^{i,j} → K^{i+2,j}`, blocks ordered by `k`.
    pub fn total_n(&self, i: i64, j: i64) -> Matrix<F> {
        let ks: Vec<i64> = self.k_range().collect();
        let src: Vec<usize> = ks
            .iter()
            .map(|&k| self.dim_unchecked(TriDegree::new(i, j, k)))
            .collect();
        let tgt: Vec<usize> = ks
            .iter()
            .map(|&k| self.dim_unchecked(TriDegree::new(i + 2, j, k)))
            .collect();
        let mut m = Matrix::zeros(tgt.iter().sum(), src.iter().sum());
        let (mut so, mut to) = (0, 0);
        let mut to_offsets = Vec::new();
        for &d in &tgt {
            to_offsets.push(to);
            to += d;
        }
        for (x, &k) in ks.iter().enumerate() {
            if src[x] > 0 && x + 1 < ks.len() && tgt[x + 1] > 0 {
                m.set_block(
                    to_offsets[x + 1],
                    so,
                    &self.n_unchecked(TriDegree::new(i, j, k)),
                );
            }
            so += src[x];
        }
        m
    }

    /// The row `q ↦ K^{q + di, q + dj}` with differential `∂`, on the window of
    /// `q` for which both indices stay inside the bounds.
    pub fn row(&self, di: i64, dj: i64) -> Result<CochainComplex<F>, ComplexError> {
        let lo = (self.bounds.i.0 - di).max(self.bounds.j.0 - dj);
        let hi = (self.bounds.i.1 - di).min(self.bounds.j.1 - dj);
        if lo > hi {
            return Ok(CochainComplex::zero());
        }
        let dims: Vec<usize> = (lo..=hi)
            .map(|q| self.bigraded_dim(q + di, q + dj))
            .collect();
        let diffs = (lo..hi)
            .map(|q| self.total_differential(q + di, q + dj))
            .collect::<Result<_, _>>()?;
        CochainComplex::new(lo, dims, diffs).map_err(|e| match e {
            ComplexError::NotAComplex { degree, witness } => ComplexError::DataNotAComplex {
                i: degree + di,
                j: degree + dj,
                witness,
            },
            e => e,
        })
    }

    /// `Cone(N)` between the rows `A^q = K^{q-2*, q-n}` and
    /// `B^q = K^{q-2*+2, q-n}`.
    pub fn monodromy_cone(&self, star: i64) -> Result<ConeComplex<F>, ComplexError> {
        let n = self.n();
        let a = self.row(-2 * star, -n)?;
        let b = self.row(-2 * star + 2, -n)?;
        let lo = a.start().min(b.start());
        let hi = a.end().max(b.end());
        let (a, b) = (a.rewindow(lo, hi)?, b.rewindow(lo, hi)?);
        cone(&a, &b, |q| {
            if q < lo || q >= hi {
                Matrix::zeros(b.dim(q), a.dim(q))
            } else {
                self.total_n(q - 2 * star, q - n)
            }
        })
    }

    /// Nonzero pieces inside the bounds, in `(i, j, k)` order.
    pub fn nonzero_pieces(&self) -> Vec<(TriDegree, Slot, usize)> {
        let mut out = Vec::new();
        for i in self.bounds.i.0..=self.bounds.i.1 {
            for j in self.bounds.j.0..=self.bounds.j.1 {
                for k in self.k_range() {
                    let t = TriDegree::new(i, j, k);
                    if let Some(s) = self.slot(t) {
                        let d = self.dim_unchecked(t);
                        if d > 0 {
                            out.push((t, s, d));
                        }
                    }
                }
            }
        }
        out
    }
}
