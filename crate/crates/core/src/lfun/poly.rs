use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{field_pow, Field};

/// Dense univariate polynomial in `t`, coefficients from low to high degree,
/// never with a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `c · t^k`
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `t - root`
    pub fn linear_root(root: &F) -> Self {
        Self::new(vec![-root.clone(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Single term `c · t^k`, if the polynomial is one.
    pub fn as_monomial(&self) -> Option<(F, usize)> {
        let nonzero: Vec<usize> = (0..self.coeffs.len())
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect();
        match nonzero[..] {
            [k] => Some((self.coeffs[k].clone(), k)),
            _ => None,
        }
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&(F::one() / lc.clone())),
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d
            .leading()
            .expect("division by the zero polynomial")
            .clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / dl.clone();
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].clone() - c.clone() * di.clone();
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Multiplicity of `root` and the cofactor after removing `(t - root)^m`.
    pub fn split_root(&self, root: &F) -> (usize, Self) {
        assert!(!self.is_zero(), "the zero polynomial has every root");
        let lin = Self::linear_root(root);
        let mut m = 0;
        let mut p = self.clone();
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return (m, p);
            }
            m += 1;
            p = q;
        }
    }

    /// `p(t^d)`
    pub fn substitute_power(&self, d: usize) -> Self {
        assert!(d >= 1, "substitution exponent must be positive");
        let mut v = vec![F::zero(); (self.coeffs.len().max(1) - 1) * d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * d] = c.clone();
        }
        Self::new(v)
    }

    /// The polynomial `p̃` with `p(1/(c t)) = t^{-deg p} · p̃(t)`.
    pub fn reciprocal_scaled(&self, c: &F) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        Self::new(
            (0..=d)
                .map(|k| self.coeffs[d - k].clone() * field_pow(c, -((d - k) as i64)))
                .collect(),
        )
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: Self) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: Self) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: Self) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}
