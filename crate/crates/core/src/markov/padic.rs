//! Certificates that an orbit is infinite, from p-adic valuations.
//!
//! When every slope has negative `r`-adic valuation, an iterate whose
//! valuation is below that of all intercepts (shifted by the smallest slope
//! exponent) and of all breakpoints has strictly decreasing valuation from
//! then on, so the orbit never repeats and never meets a breakpoint.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::map_model::{Location, PLMap};
use crate::number::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicCertificate {
    pub prime: BigInt,
    /// First iterate index meeting the valuation threshold.
    pub step: usize,
    /// Valuation of that iterate.
    pub valuation: i64,
    pub threshold: i64,
}

impl PadicCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "prime": self.prime.to_string(),
            "step": self.step,
            "valuation": self.valuation,
            "threshold": self.threshold,
        })
    }
}

fn int_valuation(n: &BigInt, r: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    while !n.is_zero() && (&n % r).is_zero() {
        n /= r;
        k += 1;
    }
    k
}

/// `v_r(x)`, `None` for zero.
pub fn valuation(x: &BigRational, r: &BigInt) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), r) - int_valuation(x.denom(), r))
}

/// Prime factors found by trial division up to `limit`; the cofactor is
/// dropped when it exceeds the limit squared.
fn small_primes(n: &BigInt, limit: u64) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n && d <= BigInt::from(limit) {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() && n <= BigInt::from(limit) * BigInt::from(limit) {
        out.push(n);
    }
    out
}

/// Tries to certify that the orbit of `x0` is infinite within `bound` steps.
pub fn padic_infinite_orbit(map: &PLMap, x0: &Scalar, bound: usize) -> Option<PadicCertificate> {
    let slopes: Option<Vec<BigRational>> = map.branches().iter().map(|b| b.slope.as_rational().cloned()).collect();
    let intercepts: Option<Vec<BigRational>> =
        map.branches().iter().map(|b| b.intercept.as_rational().cloned()).collect();
    let bps: Option<Vec<BigRational>> = map.breakpoints().iter().map(|b| b.as_rational().cloned()).collect();
    let (slopes, intercepts, bps) = (slopes?, intercepts?, bps?);
    x0.as_rational()?;
    let denom_lcm = slopes.iter().fold(BigInt::one(), |acc, s| acc.lcm(s.denom()));
    for r in small_primes(&denom_lcm, 1 << 16) {
        let exps: Vec<i64> = slopes.iter().map(|s| -valuation(s, &r).expect("nonzero slope")).collect();
        let f_min = *exps.iter().min().expect("at least one lap");
        if f_min < 1 {
            continue;
        }
        let vb = intercepts.iter().filter_map(|b| valuation(b, &r)).min().map(|v| v + f_min);
        let vp = bps.iter().filter_map(|b| valuation(b, &r)).min();
        let threshold = [vb, vp].into_iter().flatten().min().expect("1 is a breakpoint");
        let mut x = x0.clone();
        for step in 0..=bound {
            let q = x.as_rational().expect("rational orbit").clone();
            if let Some(v) = valuation(&q, &r) {
                if v < threshold {
                    return Some(PadicCertificate { prime: r, step, valuation: v, threshold });
                }
            }
            x = match map.locate(&x).ok()? {
                Location::Interior(i) => map.branches()[i].eval(&x),
                Location::Breakpoint(0) => map.branches()[0].eval(&x),
                Location::Breakpoint(j) if j == map.laps() => map.branches()[j - 1].eval(&x),
                Location::Breakpoint(_) => break,
            };
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let r = BigInt::from(2);
        assert_eq!(valuation(&BigRational::new(3.into(), 8.into()), &r), Some(-3));
        assert_eq!(valuation(&BigRational::new(12.into(), 1.into()), &r), Some(2));
        assert_eq!(valuation(&BigRational::zero(), &r), None);
    }

    #[test]
    fn beta_three_halves_orbit_of_one_is_infinite() {
        let b = PLMap::beta(&Scalar::frac(3, 2)).unwrap();
        let c = padic_infinite_orbit(&b, &Scalar::one(), 64).unwrap();
        assert_eq!(c.prime, BigInt::from(2));
        // 1 -> 1/2 already has valuation below the threshold.
        assert_eq!(c.step, 1);
    }

    #[test]
    fn tent_three_halves_critical_orbit_is_infinite() {
        let t = PLMap::tent(&Scalar::frac(3, 2)).unwrap();
        assert!(padic_infinite_orbit(&t, &Scalar::one(), 64).is_some());
    }

    #[test]
    fn finite_orbits_get_no_certificate() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        assert!(padic_infinite_orbit(&t, &Scalar::one(), 64).is_none());
    }

    #[test]
    fn nine_fifths_tent_uses_five_adic_valuation() {
        let t = PLMap::tent(&Scalar::frac(9, 5)).unwrap();
        let c = padic_infinite_orbit(&t, &Scalar::one(), 64).unwrap();
        assert_eq!(c.prime, BigInt::from(5));
    }
}
