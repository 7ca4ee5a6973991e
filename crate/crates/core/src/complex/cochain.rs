use std::fmt;

use super::ComplexError;
use crate::linalg::{rank, Matrix};
use crate::scalar::Field;

/// A bounded cochain complex of finite-dimensional spaces on the degree
/// window `start .. start + dims.len()`; spaces outside the window are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainComplex<F> {
    start: i64,
    dims: Vec<usize>,
    /// `diffs[t]` maps degree `start + t` to `start + t + 1`.
    diffs: Vec<Matrix<F>>,
}

impl<F: Field> CochainComplex<F> {
    /// `diffs` must have one entry fewer than `dims` (none for an empty window).
    pub fn new(start: i64, dims: Vec<usize>, diffs: Vec<Matrix<F>>) -> Result<Self, ComplexError> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(ComplexError::Window {
                dims: dims.len(),
                diffs: diffs.len(),
            });
        }
        for (t, d) in diffs.iter().enumerate() {
            let expected = (dims[t + 1], dims[t]);
            if d.shape() != expected {
                return Err(ComplexError::Shape {
                    degree: start + t as i64,
                    expected,
                    found: d.shape(),
                });
            }
        }
        for t in 1..diffs.len() {
            let sq = &diffs[t] * &diffs[t - 1];
            if let Some((r, c, v)) = sq.first_nonzero() {
                return Err(ComplexError::NotAComplex {
                    degree: start + t as i64 - 1,
                    witness: (r, c, v.to_string()),
                });
            }
        }
        Ok(CochainComplex { start, dims, diffs })
    }

    pub fn zero() -> Self {
        CochainComplex {
            start: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// First degree of the window.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last degree of the window.
    pub fn end(&self) -> i64 {
        self.start + self.dims.len() as i64
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.index(degree).map_or(0, |t| self.dims[t])
    }

    fn index(&self, degree: i64) -> Option<usize> {
        let t = degree - self.start;
        (t >= 0 && (t as usize) < self.dims.len()).then_some(t as usize)
    }

    /// The differential leaving `degree`, zero outside the window.
    pub fn differential(&self, degree: i64) -> Matrix<F> {
        match self.index(degree) {
            Some(t) if t < self.diffs.len() => self.diffs[t].clone(),
            _ => Matrix::zeros(self.dim(degree + 1), self.dim(degree)),
        }
    }

    /// Lowest degree with a nonzero space.
    pub fn lowest_nonzero(&self) -> Option<i64> {
        self.dims
            .iter()
            .position(|&d| d > 0)
            .map(|t| self.start + t as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// The same complex on the window `lo .. hi`, which must contain every
    /// nonzero space.
    pub fn rewindow(&self, lo: i64, hi: i64) -> Result<Self, ComplexError> {
        if (self.start..self.end()).any(|d| (d < lo || d >= hi) && self.dim(d) > 0) {
            return Err(ComplexError::Truncation { lo, hi });
        }
        let dims: Vec<usize> = (lo..hi).map(|d| self.dim(d)).collect();
        let diffs = (lo..hi - 1).map(|d| self.differential(d)).collect();
        CochainComplex::new(lo, dims, diffs)
    }

    /// `H^d` dimensions on the window.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        (self.start..self.end())
            .map(|d| {
                let out = self.differential(d);
                let inc = self.differential(d - 1);
                self.dim(d) - rank(&out) - rank(&inc)
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.start, &self.dims)
    }
}

pub(crate) fn alternating_sum(start: i64, v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(t, &d)| {
            if (start + t as i64).rem_euclid(2) == 0 {
                d as i64
            } else {
                -(d as i64)
            }
        })
        .sum()
}

impl<F: Field> fmt::Display for CochainComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (self.start..self.end())
            .map(|d| format!("{d}:{}", self.dim(d)))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// The mapping cone of a chain map `f : A → B`, in degree `Q` the space
/// `A^Q ⊕ B^{Q-1}` with `D(a, b) = (∂a, f a - ∂b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeComplex<F> {
    complex: CochainComplex<F>,
    source: CochainComplex<F>,
    target: CochainComplex<F>,
}

impl<F: Field> ConeComplex<F> {
    pub fn complex(&self) -> &CochainComplex<F> {
        &self.complex
    }

    pub fn source(&self) -> &CochainComplex<F> {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex<F> {
        &self.target
    }
}

/// Cone of the chain map given degreewise by `map(d) : A^d → B^d`.
/// Verifies `f ∂ = ∂ f` and `D² = 0`.
pub fn cone<F: Field>(
    a: &CochainComplex<F>,
    b: &CochainComplex<F>,
    map: impl Fn(i64) -> Matrix<F>,
) -> Result<ConeComplex<F>, ComplexError> {
    let lo = a.start.min(b.start);
    let hi = a.end().max(b.end());
    if lo >= hi {
        return Ok(ConeComplex {
            complex: CochainComplex::zero(),
            source: a.clone(),
            target: b.clone(),
        });
    }
    let maps: Vec<Matrix<F>> = (lo - 1..=hi).map(&map).collect();
    let f = |d: i64| &maps[(d - lo + 1) as usize];
    for d in lo - 1..hi {
        let fd = f(d);
        if fd.shape() != (b.dim(d), a.dim(d)) {
            return Err(ComplexError::Shape {
                degree: d,
                expected: (b.dim(d), a.dim(d)),
                found: fd.shape(),
            });
        }
    }
    for d in lo - 1..hi {
        let lhs = f(d + 1) * &a.differential(d);
        let rhs = &b.differential(d) * f(d);
        if lhs != rhs {
            return Err(ComplexError::NotChainMap { degree: d });
        }
    }
    // cone degrees lo ..= hi
    let dims: Vec<usize> = (lo..=hi).map(|q| a.dim(q) + b.dim(q - 1)).collect();
    let diffs = (lo..hi)
        .map(|q| {
            let (a0, b0) = (a.dim(q), b.dim(q - 1));
            let (a1, b1) = (a.dim(q + 1), b.dim(q));
            let mut m = Matrix::zeros(a1 + b1, a0 + b0);
            m.set_block(0, 0, &a.differential(q));
            m.set_block(a1, 0, f(q));
            m.set_block(a1, a0, &-&b.differential(q - 1));
            m
        })
        .collect();
    let complex = CochainComplex::new(lo, dims, diffs)?;
    Ok(ConeComplex {
        complex,
        source: a.clone(),
        target: b.clone(),
    })
}
