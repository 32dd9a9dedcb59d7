//! Dense univariate polynomials over `Q`, plus the root-counting machinery
//! (Sturm sequences, real-root isolation) used to pin down real algebraic
//! numbers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rat;

/// Polynomial with rational coefficients, little-endian, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, u)` with `g = gcd(self, modulus)` monic and
    /// `u * self ≡ g (mod modulus)`.
    pub fn gcd_ext(&self, modulus: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (self.clone(), modulus.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let lead = r0.leading();
        let inv = BigRational::one() / lead;
        (r0.scale(&inv), s0.scale(&inv))
    }

    /// `self / gcd(self, self')`, monic.
    pub fn square_free(&self) -> Self {
        if self.is_constant() {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        rat::signum(&self.eval(x))
    }

    /// Interval Horner evaluation over `[lo, hi]`; the result encloses the range.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in self.coeffs.iter().rev() {
            let p = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let mut mn = p[0].clone();
            let mut mx = p[0].clone();
            for v in &p[1..] {
                if *v < mn {
                    mn = v.clone();
                }
                if *v > mx {
                    mx = v.clone();
                }
            }
            acc = (mn + c, mx + c);
        }
        acc
    }

    /// Scales to a primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Sturm sequence of the square-free part.
    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let p = self.square_free();
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let mut m = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + BigRational::one()
    }

    /// Isolating intervals `(lo, hi]` of the distinct real roots, ascending.
    /// Each returned interval has rational endpoints that are not roots.
    pub fn isolate_real_roots(&self) -> Vec<(BigRational, BigRational)> {
        if self.is_constant() {
            return Vec::new();
        }
        let sturm = Sturm::new(self);
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = sturm.count(&lo, &hi);
            if n == 0 {
                continue;
            }
            let sf = &sturm.seq[0];
            if n == 1 && !sf.eval(&lo).is_zero() && !sf.eval(&hi).is_zero() {
                out.push((lo, hi));
                continue;
            }
            let mid = rat::midpoint(&lo, &hi);
            if sf.eval(&mid).is_zero() {
                // Exact rational root: fence it with a tiny interval and split around it.
                let mut eps = (&hi - &lo) / rat::int(4);
                loop {
                    let (a, b2) = (&mid - &eps, &mid + &eps);
                    if sturm.count(&a, &b2) == 1 && !sf.eval(&a).is_zero() && !sf.eval(&b2).is_zero()
                    {
                        out.push((a.clone(), b2.clone()));
                        stack.push((lo.clone(), a));
                        stack.push((b2, hi.clone()));
                        break;
                    }
                    eps /= rat::int(2);
                }
            } else {
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Rational roots (via the rational root theorem on the primitive integer form).
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut out = Vec::new();
        for (lo, hi) in self.isolate_real_roots() {
            let sf = self.square_free();
            let mut lo = lo;
            let mut hi = hi;
            // An isolated rational root has a bounded denominator; refine and test candidates.
            let ints = sf.primitive_integer();
            let lead = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
            let cnst = ints[0].abs();
            if cnst.is_zero() {
                if lo < BigRational::zero() && BigRational::zero() < hi {
                    out.push(BigRational::zero());
                }
                continue;
            }
            // Width small enough that at most one fraction with denominator ≤ lead fits.
            let target = BigRational::new(BigInt::one(), &lead * &lead * BigInt::from(2));
            while &hi - &lo > target {
                let mid = rat::midpoint(&lo, &hi);
                if sf.eval(&mid).is_zero() {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if sf.sign_at(&lo) * sf.sign_at(&mid) < 0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if lo == hi {
                out.push(lo);
                continue;
            }
            let mut q = BigInt::one();
            while q <= lead {
                if lead.is_multiple_of(&q) {
                    let p = (&hi * BigRational::from_integer(q.clone())).floor().to_integer();
                    let cand = BigRational::new(p, q.clone());
                    if cand > lo && cand <= hi && sf.eval(&cand).is_zero() {
                        out.push(cand);
                        break;
                    }
                }
                q += 1;
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", a)?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{}", k)?,
            }
        }
        Ok(())
    }
}

/// Precomputed Sturm chain for repeated root counting.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<QPoly>,
}

impl Sturm {
    pub fn new(p: &QPoly) -> Self {
        Sturm { seq: p.sturm_sequence() }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Number of distinct real roots in the closed interval `[lo, hi]`.
    pub fn count_closed(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let extra = usize::from(self.seq[0].eval(lo).is_zero());
        self.count(lo, hi) + extra
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c.iter().copied())
    }

    #[test]
    fn division_and_gcd() {
        // (t^2 - 1) = (t - 1)(t + 1)
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, 2, 1])), p(&[1, 1]));
    }

    #[test]
    fn extended_gcd_gives_inverse() {
        let m = p(&[-1, -1, 1]);
        let a = p(&[0, 1]);
        let (g, u) = a.gcd_ext(&m);
        assert_eq!(g, QPoly::one());
        assert_eq!(u.mul(&a).rem(&m), QPoly::one());
    }

    #[test]
    fn sturm_counts_roots() {
        // t^3 - 3t - 2 = (t + 1)^2 (t - 2): distinct roots -1, 2
        let q = p(&[-2, -3, 0, 1]);
        let roots = q.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        assert_eq!(q.rational_roots(), vec![rat::int(-1), rat::int(2)]);
        let s = Sturm::new(&p(&[-2, 0, 1]));
        assert_eq!(s.count(&rat::int(0), &rat::int(2)), 1);
        assert_eq!(s.count(&rat::int(-2), &rat::int(2)), 2);
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(p(&[-1, -1, 1]).to_string(), "t^2 - t - 1");
        assert_eq!(p(&[0, -2, 1]).to_string(), "t^2 - 2t");
    }
}
