use std::fmt;
use std::ops::{Div, Mul};

use super::poly::Poly;
use super::LfunError;
use crate::scalar::Field;

/// A rational function `numerator / denominator` in `t`, kept reduced:
/// coprime parts and a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, LfunError> {
        if den.is_zero() {
            return Err(LfunError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lc = d.leading().expect("nonzero denominator").clone();
        let inv = F::one() / lc;
        RatFunc {
            num: n.scale(&inv),
            den: d.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `c · t^k` for any integer `k`.
    pub fn monomial(c: F, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            Self::reduce(
                Poly::constant(c),
                Poly::monomial(F::one(), k.unsigned_abs() as usize),
            )
        }
    }

    /// `1 / p`.
    pub fn reciprocal_of(p: Poly<F>) -> Result<Self, LfunError> {
        Self::new(Poly::one(), p)
    }

    pub fn numerator(&self) -> &Poly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    pub fn inverse(&self) -> Result<Self, LfunError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, LfunError> {
        Ok(self * &rhs.inverse()?)
    }

    /// `c · t^k` if this function is a single monomial.
    pub fn as_monomial(&self) -> Option<(F, i64)> {
        let (cn, kn) = self.num.as_monomial()?;
        let (cd, kd) = self.den.as_monomial()?;
        Some((cn / cd, kn as i64 - kd as i64))
    }

    /// The function `t ↦ f(1/(c t))`.
    pub fn substitute_reciprocal(&self, c: &F) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let n = self.num.reciprocal_scaled(c);
        let d = self.den.reciprocal_scaled(c);
        let shift = Self::monomial(F::one(), dd - dn);
        &Self::reduce(n, d) * &shift
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl<F: Field> Mul for &RatFunc<F> {
    type Output = RatFunc<F>;

    fn mul(self, rhs: Self) -> RatFunc<F> {
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics when dividing by the zero function; see [`RatFunc::try_div`].
impl<F: Field> Div for &RatFunc<F> {
    type Output = RatFunc<F>;

    fn div(self, rhs: Self) -> RatFunc<F> {
        self.try_div(rhs)
            .expect("division by the zero rational function")
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly<F>| {
            if p.as_monomial().is_some() {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        // Euler-factor shape: denominator with constant term 1 when possible.
        let c = self.den.coeff(0);
        let (num, den) = if c.is_zero() {
            (self.num.clone(), self.den.clone())
        } else {
            let r = F::one() / c;
            (self.num.scale(&r), self.den.scale(&r))
        };
        write!(f, "{} / {}", wrap(&num), wrap(&den))
    }
}

impl<F: Field> Poly<F> {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }
}
