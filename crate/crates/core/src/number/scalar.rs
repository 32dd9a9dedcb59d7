//! Exact scalars in Q or Q(s).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::context::AlgebraicContext;
use super::poly::QPoly;
use super::rat;
use crate::error::{Error, Result};

/// An element of Q(s) with `deg < d`, never constant.
#[derive(Clone, Debug)]
pub struct AlgebraicValue {
    coeffs: QPoly,
    ctx: AlgebraicContext,
}

impl AlgebraicValue {
    pub fn poly(&self) -> &QPoly {
        &self.coeffs
    }

    pub fn context(&self) -> &AlgebraicContext {
        &self.ctx
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Algebraic(AlgebraicValue),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(rat::int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Scalar::Rational(rat::frac(p, q))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rational(BigRational::from_integer(n))
    }

    /// The generator `s` of the context.
    pub fn generator(ctx: &AlgebraicContext) -> Self {
        Self::from_poly(ctx, QPoly::x())
    }

    /// Reduces `p(s)` to canonical form.
    pub fn from_poly(ctx: &AlgebraicContext, p: QPoly) -> Self {
        let r = p.rem(ctx.monic_minpoly());
        if r.is_constant() {
            Scalar::Rational(r.coeff(0))
        } else {
            Scalar::Algebraic(AlgebraicValue { coeffs: r, ctx: ctx.clone() })
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Algebraic(_) => None,
        }
    }

    /// Integer value, if the scalar is an integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn context(&self) -> Option<&AlgebraicContext> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Algebraic(a) => Some(&a.ctx),
        }
    }

    /// Canonical polynomial representative together with its context (if any).
    pub fn as_poly(&self) -> QPoly {
        match self {
            Scalar::Rational(r) => QPoly::constant(r.clone()),
            Scalar::Algebraic(a) => a.coeffs.clone(),
        }
    }

    fn joint_ctx<'a>(&'a self, other: &'a Self) -> Result<Option<&'a AlgebraicContext>> {
        match (self.context(), other.context()) {
            (Some(a), Some(b)) => {
                if a.same_root(b) {
                    Ok(Some(a))
                } else {
                    Err(Error::ContextMismatch)
                }
            }
            (Some(a), None) | (None, Some(a)) => Ok(Some(a)),
            (None, None) => Ok(None),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a + b));
        }
        let ctx = self.joint_ctx(other)?.expect("algebraic operand");
        Ok(Self::from_poly(ctx, self.as_poly().add(&other.as_poly())))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a - b));
        }
        let ctx = self.joint_ctx(other)?.expect("algebraic operand");
        Ok(Self::from_poly(ctx, self.as_poly().sub(&other.as_poly())))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Rational(r), Scalar::Algebraic(v)) | (Scalar::Algebraic(v), Scalar::Rational(r)) => {
                Ok(Self::from_poly(&v.ctx, v.coeffs.scale(r)))
            }
            _ => {
                let ctx = self.joint_ctx(other)?.expect("algebraic operand");
                Ok(Self::from_poly(ctx, self.as_poly().mul(&other.as_poly())))
            }
        }
    }

    pub fn try_recip(&self) -> Result<Self> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Algebraic(v) => {
                let (g, u) = v.coeffs.gcd_ext(v.ctx.monic_minpoly());
                debug_assert!(g.is_constant(), "minimal polynomial is irreducible");
                Ok(Self::from_poly(&v.ctx, u))
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Scalar::Rational(a / b));
        }
        self.joint_ctx(other)?;
        self.try_mul(&other.try_recip()?)
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.try_recip().expect("power of zero with negative exponent") } else { self.clone() };
        let mut acc = Scalar::one();
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Exact sign.
    pub fn sign(&self) -> i32 {
        match self {
            Scalar::Rational(r) => rat::signum(r),
            Scalar::Algebraic(v) => {
                let (mut a, mut b) = {
                    let (lo, hi) = v.ctx.interval();
                    (lo.clone(), hi.clone())
                };
                loop {
                    let (elo, ehi) = v.coeffs.eval_interval(&a, &b);
                    if elo.is_positive() {
                        return 1;
                    }
                    if ehi.is_negative() {
                        return -1;
                    }
                    if a == b {
                        // Exact rational root: the evaluation is exact.
                        return rat::signum(&elo);
                    }
                    v.ctx.bisect(&mut a, &mut b);
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Rational enclosure `[lo, hi]` with `hi - lo <= width`.
    pub fn refine_interval(&self, width: &BigRational) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(r) => (r.clone(), r.clone()),
            Scalar::Algebraic(v) => {
                let (mut a, mut b) = {
                    let (lo, hi) = v.ctx.interval();
                    (lo.clone(), hi.clone())
                };
                loop {
                    let (elo, ehi) = v.coeffs.eval_interval(&a, &b);
                    if &ehi - &elo <= *width {
                        return (elo, ehi);
                    }
                    v.ctx.bisect(&mut a, &mut b);
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => rat::to_f64(r),
            Scalar::Algebraic(_) => {
                let (lo, hi) = self.refine_interval(&rat::pow2_inv(64));
                rat::to_f64(&rat::midpoint(&lo, &hi))
            }
        }
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        match self {
            Scalar::Rational(r) => r.floor().to_integer(),
            Scalar::Algebraic(_) => {
                let mut w = rat::int(1);
                loop {
                    let (lo, hi) = self.refine_interval(&w);
                    let (fl, fh) = (lo.floor(), hi.floor());
                    // An irrational value is never an integer, so equal floors on a
                    // non-integer-endpoint enclosure decide it.
                    if fl == fh && !hi.is_integer() {
                        return fl.to_integer();
                    }
                    w /= rat::int(2);
                }
            }
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Renders a short human form such as `3/2` or `s + 1 (≈2.6180340)`.
    pub fn pretty(&self) -> String {
        match self {
            Scalar::Rational(r) => rat::render(r),
            Scalar::Algebraic(v) => format!("{} (≈{:.10})", v.coeffs.to_string().replace('t', "s"), self.to_f64()),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Algebraic(a), Scalar::Algebraic(b)) => a.coeffs == b.coeffs && a.ctx.same_root(&b.ctx),
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Rational(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Scalar::Algebraic(v) => {
                1u8.hash(state);
                v.coeffs.hash(state);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Panics when the operands come from different contexts.
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return a.cmp(b);
        }
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("scalar {}: {e}", stringify!($method)))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Algebraic(v) => Scalar::Algebraic(AlgebraicValue { coeffs: v.coeffs.neg(), ctx: v.ctx.clone() }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}
