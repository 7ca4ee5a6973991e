//! L-functions of function fields as rational functions in `t = q^{-s}`.
//!
//! A place of degree `d` contributes `1/det(I - F t^d)`. Orders of vanishing
//! and leading Laurent coefficients at `s = a` are read off at the rational
//! point `t₀ = q^{-a}`; the only transcendental factor is a power of `log q`,
//! which is carried as an integer exponent.

mod poly;
mod ratfunc;

use std::fmt;

use thiserror::Error;

pub use poly::Poly;
pub use ratfunc::RatFunc;

use crate::linalg::Matrix;
use crate::scalar::{field_pow, from_int, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LfunError {
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("the function is identically zero")]
    IdenticallyZero,
    #[error("frobenius at place {label} has shape {shape:?}, expected square")]
    NotSquare {
        label: String,
        shape: (usize, usize),
    },
    #[error("place {label} has degree 0")]
    ZeroDegree { label: String },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// Frobenius data at one place: `N(v) = q^degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaceDatum<F> {
    label: String,
    degree: u32,
    frob: Matrix<F>,
}

impl<F: Field> PlaceDatum<F> {
    pub fn new(label: impl Into<String>, degree: u32, frob: Matrix<F>) -> Result<Self, LfunError> {
        let label = label.into();
        if frob.rows() != frob.cols() {
            return Err(LfunError::NotSquare {
                label,
                shape: frob.shape(),
            });
        }
        if degree == 0 {
            return Err(LfunError::ZeroDegree { label });
        }
        Ok(PlaceDatum {
            label,
            degree,
            frob,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn frob(&self) -> &Matrix<F> {
        &self.frob
    }
}

/// `coeff · (log q)^logpow · (s - a)^order`, the leading Laurent term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingValue<F> {
    pub order: i64,
    pub coeff: F,
    pub logpow: i64,
}

impl<F: Field> fmt::Display for LeadingValue<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order {}, leading {}", self.order, self.coeff)?;
        if self.logpow != 0 {
            write!(f, " * (log q)^{}", self.logpow)?;
        }
        Ok(())
    }
}

/// Monomial twist `q^q_exp · t^t_exp` standing in for the conductor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Conductor {
    pub q_exp: i64,
    pub t_exp: i64,
}

/// A completed L-function `Λ = conductor · Z(t)` over `𝔽_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletedL<F> {
    z: RatFunc<F>,
    field_q: u64,
    weight: i64,
    conductor: Option<Conductor>,
}

impl<F: Field> CompletedL<F> {
    pub fn new(
        z: RatFunc<F>,
        field_q: u64,
        weight: i64,
        conductor: Option<Conductor>,
    ) -> Result<Self, LfunError> {
        if !is_prime_power(field_q) {
            return Err(LfunError::NotPrimePower(field_q));
        }
        Ok(CompletedL {
            z,
            field_q,
            weight,
            conductor,
        })
    }

    pub fn z(&self) -> &RatFunc<F> {
        &self.z
    }

    pub fn field_q(&self) -> u64 {
        self.field_q
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn conductor(&self) -> Option<Conductor> {
        self.conductor
    }

    /// The centre exponent `w = weight + 1` of `s ↦ w - s`.
    pub fn symmetry_exponent(&self) -> i64 {
        self.weight + 1
    }

    /// `Z` times the conductor monomial.
    pub fn twisted(&self) -> RatFunc<F> {
        match self.conductor {
            None => self.z.clone(),
            Some(c) => {
                let qf: F = from_int(self.field_q as i64);
                &RatFunc::monomial(field_pow(&qf, c.q_exp), c.t_exp) * &self.z
            }
        }
    }

    pub fn leading_value(&self, a: i64) -> Result<LeadingValue<F>, LfunError> {
        leading_laurent(&self.twisted(), self.field_q, a)
    }
}

/// `Λ(1/(q^w t)) = sign · q^q_exp · t^t_exp · Λ(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionalEquation {
    pub sign: i8,
    pub q_exp: i64,
    pub t_exp: i64,
}

impl fmt::Display for FunctionalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "sign {s}1, q^{} t^{}", self.q_exp, self.t_exp)
    }
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

/// Coefficients of `det(I - t·m)`, low degree first, by Faddeev-LeVerrier.
pub fn reversed_charpoly<F: Field>(m: &Matrix<F>) -> Poly<F> {
    let n = m.rows();
    assert_eq!(
        n,
        m.cols(),
        "characteristic polynomial of a non-square matrix"
    );
    // c[k] is the coefficient of x^k in det(xI - m).
    let mut c = vec![F::zero(); n + 1];
    c[n] = F::one();
    let mut mk = Matrix::<F>::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            let v = next.get(i, i).clone() + c[n - k + 1].clone();
            next.set(i, i, v);
        }
        mk = next;
        let tr = (m * &mk).trace();
        c[n - k] = -tr / from_int::<F>(k as i64);
    }
    c.reverse();
    Poly::new(c)
}

/// `1 / det(I - frob · t^deg)`.
pub fn local_factor<F: Field>(p: &PlaceDatum<F>) -> RatFunc<F> {
    let euler = reversed_charpoly(&p.frob).substitute_power(p.degree as usize);
    RatFunc::reciprocal_of(euler).expect("euler polynomial has constant term 1")
}

pub fn product_over_places<F: Field>(places: &[PlaceDatum<F>]) -> RatFunc<F> {
    places
        .iter()
        .fold(RatFunc::one(), |acc, p| &acc * &local_factor(p))
}

/// `Λ.Z` with the local factors at `s` divided out.
pub fn strip_s<F: Field>(lambda: &CompletedL<F>, s: &[PlaceDatum<F>]) -> RatFunc<F> {
    lambda
        .z
        .try_div(&product_over_places(s))
        .expect("local factors are never zero")
}

fn evaluation_point<F: Field>(q: u64, a: i64) -> F {
    field_pow(&from_int::<F>(q as i64), -a)
}

/// Order of vanishing at `s = a` (negative for a pole).
pub fn ord_at<F: Field>(f: &RatFunc<F>, q: u64, a: i64) -> Result<i64, LfunError> {
    if f.is_zero() {
        return Err(LfunError::IdenticallyZero);
    }
    let t0 = evaluation_point::<F>(q, a);
    let (mn, _) = f.numerator().split_root(&t0);
    let (md, _) = f.denominator().split_root(&t0);
    Ok(mn as i64 - md as i64)
}

/// Leading term of `f(q^{-s})` at `s = a`.
///
/// With `f = (t - t₀)^d g` and `t - t₀ = -t₀ log q (s - a) + O((s - a)²)` the
/// leading term is `g(t₀) (-t₀)^d (log q)^d (s - a)^d`.
pub fn leading_laurent<F: Field>(
    f: &RatFunc<F>,
    q: u64,
    a: i64,
) -> Result<LeadingValue<F>, LfunError> {
    if f.is_zero() {
        return Err(LfunError::IdenticallyZero);
    }
    let t0 = evaluation_point::<F>(q, a);
    let (mn, gn) = f.numerator().split_root(&t0);
    let (md, gd) = f.denominator().split_root(&t0);
    let d = mn as i64 - md as i64;
    let g = gn.eval(&t0) / gd.eval(&t0);
    let coeff = g * field_pow(&-t0, d);
    Ok(LeadingValue {
        order: d,
        coeff,
        logpow: d,
    })
}

/// Finds `Λ(1/(q^w t)) / Λ(t)` as `±q^α t^β`, or `None` if it is not a monomial.
pub fn functional_equation<F: Field>(lambda: &CompletedL<F>) -> Option<FunctionalEquation> {
    let f = lambda.twisted();
    if f.is_zero() {
        return None;
    }
    let qf: F = from_int(lambda.field_q as i64);
    let c = field_pow(&qf, lambda.symmetry_exponent());
    let ratio = f.substitute_reciprocal(&c).try_div(&f).ok()?;
    let (coeff, t_exp) = ratio.as_monomial()?;
    let sign = if coeff.is_negative() { -1 } else { 1 };
    let q_exp = log_exact(&coeff.abs(), &qf)?;
    Some(FunctionalEquation { sign, q_exp, t_exp })
}

/// `k` with `x = base^k`, for `base > 1`.
fn log_exact<F: Field>(x: &F, base: &F) -> Option<i64> {
    let mut y = x.clone();
    let mut k = 0i64;
    while y > F::one() {
        y = y / base.clone();
        k += 1;
    }
    while y < F::one() && !y.is_zero() {
        y = y * base.clone();
        k -= 1;
    }
    y.is_one().then_some(k)
}

/// ζ of `𝔽_q(T)`: `Z = 1/((1 - t)(1 - q t))`, weight 0.
pub fn zeta_rational_function_field<F: Field>(q: u64) -> Result<CompletedL<F>, LfunError> {
    if !is_prime_power(q) {
        return Err(LfunError::NotPrimePower(q));
    }
    let qf: F = from_int(q as i64);
    let den = &Poly::new(vec![F::one(), -F::one()]) * &Poly::new(vec![F::one(), -qf]);
    CompletedL::new(RatFunc::reciprocal_of(den)?, q, 0, None)
}
