//! A real algebraic generator: irreducible minimal polynomial plus an
//! isolating interval for one of its real roots.

use std::fmt;
use std::sync::Arc;

use algebraics::polynomial::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{QPoly, Sturm};
use super::rat;
use crate::error::{Error, Result};

/// Width to which the isolating interval is refined at construction time.
const PRESET_BITS: u32 = 64;

#[derive(Debug)]
struct Inner {
    minpoly: Vec<BigInt>,
    monic: QPoly,
    /// Refined isolating interval; the root lies strictly inside.
    lo: BigRational,
    hi: BigRational,
    /// Interval as given by the caller (kept for echoing literals).
    given: (BigRational, BigRational),
}

/// Shared handle to an algebraic generator `s`.
#[derive(Clone, Debug)]
pub struct AlgebraicContext(Arc<Inner>);

impl AlgebraicContext {
    /// Validates `minpoly` (little-endian integer coefficients) and the
    /// isolating interval `[lo, hi]`.
    pub fn new(minpoly: &[BigInt], lo: BigRational, hi: BigRational) -> Result<Self> {
        let q = QPoly::from_bigints(minpoly);
        let deg = q.degree().unwrap_or(0);
        if deg < 1 {
            return Err(Error::invalid("minpoly", "degree must be at least 1"));
        }
        if lo >= hi {
            return Err(Error::invalid("interval", "lower end must be below upper end"));
        }
        if !is_irreducible(&q) {
            return Err(Error::invalid("minpoly", format!("{q} is not irreducible over Q")));
        }
        let (slo, shi) = (q.sign_at(&lo), q.sign_at(&hi));
        if slo == 0 || shi == 0 {
            return Err(Error::invalid("interval", "an endpoint is a root of the minimal polynomial"));
        }
        if Sturm::new(&q).count(&lo, &hi) != 1 {
            return Err(Error::invalid("interval", "must contain exactly one root of the minimal polynomial"));
        }
        Ok(Self::build(q, lo, hi))
    }

    /// Context for the unique root of the irreducible `p` in `(lo, hi]`;
    /// the caller guarantees irreducibility and isolation.
    pub(crate) fn from_isolated(p: &QPoly, lo: BigRational, hi: BigRational) -> Self {
        Self::build(p.clone(), lo, hi)
    }

    fn build(q: QPoly, lo: BigRational, hi: BigRational) -> Self {
        let monic = q.monic();
        let minpoly = monic.primitive_integer();
        let given = (lo.clone(), hi.clone());
        let (mut a, mut b) = (lo, hi);
        if monic.eval(&b).is_zero() {
            // Only possible for degree 1; collapse to the exact root.
            a = b.clone();
        } else {
            let target = rat::pow2_inv(PRESET_BITS);
            bisect_until(&monic, &mut a, &mut b, &target);
        }
        AlgebraicContext(Arc::new(Inner { minpoly, monic, lo: a, hi: b, given }))
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.0.minpoly
    }

    pub fn monic_minpoly(&self) -> &QPoly {
        &self.0.monic
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    /// Current isolating interval (refined).
    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.0.lo, &self.0.hi)
    }

    pub fn given_interval(&self) -> (&BigRational, &BigRational) {
        (&self.0.given.0, &self.0.given.1)
    }

    /// Returns an isolating interval for the root of width at most `width`.
    pub fn root_enclosure(&self, width: &BigRational) -> (BigRational, BigRational) {
        let (mut a, mut b) = (self.0.lo.clone(), self.0.hi.clone());
        bisect_until(&self.0.monic, &mut a, &mut b, width);
        (a, b)
    }

    /// Halves an isolating interval (a, b] in place.
    pub(crate) fn bisect(&self, a: &mut BigRational, b: &mut BigRational) {
        bisect_step(&self.0.monic, a, b);
    }

    /// True when both handles denote the same real number.
    pub fn same_root(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.minpoly != other.0.minpoly {
            return false;
        }
        let lo = self.0.lo.clone().max(other.0.lo.clone());
        let hi = self.0.hi.clone().min(other.0.hi.clone());
        lo <= hi && Sturm::new(&self.0.monic).count_closed(&lo, &hi) >= 1
    }
}

impl PartialEq for AlgebraicContext {
    fn eq(&self, other: &Self) -> bool {
        self.same_root(other)
    }
}

impl Eq for AlgebraicContext {}

impl fmt::Display for AlgebraicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in [{}, {}]", self.0.monic, self.0.given.0, self.0.given.1)
    }
}

fn bisect_step(p: &QPoly, a: &mut BigRational, b: &mut BigRational) {
    let m = rat::midpoint(a, b);
    let sm = p.sign_at(&m);
    if sm == 0 {
        *a = m.clone();
        *b = m;
    } else if sm == p.sign_at(b) {
        *b = m;
    } else {
        *a = m;
    }
}

fn bisect_until(p: &QPoly, a: &mut BigRational, b: &mut BigRational, width: &BigRational) {
    while &(&*b - &*a) > width {
        bisect_step(p, a, b);
    }
}

/// Factors a rational polynomial over Q into monic irreducible factors
/// with multiplicities (the constant factor is dropped).
pub fn factor(p: &QPoly) -> Vec<(QPoly, usize)> {
    if p.is_constant() {
        return Vec::new();
    }
    let ints = p.primitive_integer();
    let poly: Polynomial<BigInt> = Polynomial::from(ints);
    let factors = poly.factor();
    let mut out: Vec<(QPoly, usize)> = factors
        .polynomial_factors
        .into_iter()
        .map(|f| {
            let coeffs: Vec<BigInt> = f.polynomial.into_coefficients();
            (QPoly::from_bigints(&coeffs).monic(), f.power)
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.degree().cmp(&b.0.degree()).then_with(|| format!("{}", a.0).cmp(&format!("{}", b.0)))
    });
    out
}

pub fn is_irreducible(p: &QPoly) -> bool {
    let f = factor(p);
    f.len() == 1 && f[0].1 == 1
}

/// Returns the monic irreducible factor of `p` vanishing at the root isolated
/// by `(lo, hi]`, along with an isolating interval for that factor.
pub(crate) fn factor_at_root(
    p: &QPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Option<(QPoly, BigRational, BigRational)> {
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let sqf = p.square_free();
    for (f, _) in factor(p) {
        if Sturm::new(&f).count(&a, &b) == 0 {
            continue;
        }
        // Shrink until the factor has one root in (a, b] and no root at the ends.
        loop {
            let s = Sturm::new(&f);
            if s.count(&a, &b) == 1 && !f.eval(&a).is_zero() && !f.eval(&b).is_zero() {
                break;
            }
            if f.eval(&b).is_zero() {
                return Some((f.clone(), b.clone(), b));
            }
            bisect_step(&sqf, &mut a, &mut b);
        }
        return Some((f, a, b));
    }
    None
}

impl AlgebraicContext {
    /// True when the generator is an algebraic integer whose inverse is also one.
    pub fn is_unit_integer(&self) -> bool {
        let m = &self.0.minpoly;
        m.last().is_some_and(|c| c.is_one()) && m[0].abs().is_one()
    }

    /// True when the monic minimal polynomial has integer coefficients.
    pub fn is_algebraic_integer(&self) -> bool {
        self.0.minpoly.last().is_some_and(|c| c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn validates() {
        assert!(AlgebraicContext::new(&ints(&[-1, -1, 1]), rat::int(1), rat::int(2)).is_ok());
        // reducible
        assert!(AlgebraicContext::new(&ints(&[-1, 0, 1]), rat::int(0), rat::int(2)).is_err());
        // two roots of t^2 - 2 in [-2, 2]
        assert!(AlgebraicContext::new(&ints(&[-2, 0, 1]), rat::int(-2), rat::int(2)).is_err());
        // no root
        assert!(AlgebraicContext::new(&ints(&[-2, 0, 1]), rat::int(2), rat::int(3)).is_err());
    }

    #[test]
    fn factors_over_q() {
        let p = QPoly::from_ints([-2i64, -3, 0, 1]);
        let f = factor(&p);
        assert_eq!(f, vec![(QPoly::from_ints([1i64, 1]), 2), (QPoly::from_ints([-2i64, 1]), 1)]);
        assert!(is_irreducible(&QPoly::from_ints([-1i64, -1, 1])));
    }

    #[test]
    fn root_identity() {
        let a = AlgebraicContext::new(&ints(&[-2, 0, 1]), rat::int(1), rat::int(2)).unwrap();
        let b = AlgebraicContext::new(&ints(&[-2, 0, 1]), rat::frac(7, 5), rat::frac(3, 2)).unwrap();
        let c = AlgebraicContext::new(&ints(&[-2, 0, 1]), rat::int(-2), rat::int(-1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let (lo, hi) = a.root_enclosure(&rat::pow2_inv(80));
        assert!(&hi - &lo <= rat::pow2_inv(80));
        assert!(&lo * &lo < rat::int(2) && &hi * &hi > rat::int(2));
    }
}
