//! Topological entropy: exact Perron root, transfer-operator ratios, and
//! cylinder counts.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::incidence::{detect_markov, MarkovOutcome};
use super::measure::root_candidates;
use super::perron::largest_root;
use crate::error::{Error, Result};
use crate::map_model::PLMap;
use crate::number::{rat, scalar_to_json, QPoly, Scalar};
use crate::symbolic::StepFunction;
use crate::transfer::TransferContext;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntropyMethod {
    MarkovExact,
    PowerIteration { tol: BigRational, maxiter: usize },
    CylinderCount { n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub method: &'static str,
    /// Exact growth rate `s = exp(h)` when known.
    pub s_exact: Option<Scalar>,
    /// Certified rational bracket for `s`; `None` upper end means unbounded.
    pub s_bracket: (BigRational, Option<BigRational>),
    /// Bracket for `h = ln s`.
    pub h_bracket: (f64, f64),
    pub h_estimate: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Cylinder counts `c_1, …, c_n` (cylinder method only).
    pub counts: Vec<BigInt>,
}

/// Natural logarithm of a positive rational, rounded outward by a few ulps.
fn ln_bounds(x: &BigRational) -> (f64, f64) {
    let v = rat::to_f64(x);
    let l = v.ln();
    let slack = l.abs() * 4.0 * f64::EPSILON + 1e-300;
    (l - slack, l + slack)
}

fn ln_scalar(x: &Scalar) -> (f64, f64) {
    let (lo, hi) = x.refine_interval(&rat::pow2_inv(60));
    (ln_bounds(&lo).0, ln_bounds(&hi).1)
}

impl EntropyEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "method": self.method,
            "s": self.s_exact.as_ref().map(scalar_to_json),
            "s_bracket": [
                rat::render(&self.s_bracket.0),
                self.s_bracket.1.as_ref().map(rat::render),
            ],
            "h_bracket": [format!("{:.12}", self.h_bracket.0), format!("{:.12}", self.h_bracket.1)],
            "h_bracket_width": format!("{:.3e}", self.h_bracket.1 - self.h_bracket.0),
            "h_estimate": format!("{:.12}", self.h_estimate),
            "iterations": self.iterations,
            "converged": self.converged,
            "counts": self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn entropy(map: &PLMap, method: &EntropyMethod, bound: usize) -> Result<EntropyEstimate> {
    match method {
        EntropyMethod::MarkovExact => markov_exact(map, bound),
        EntropyMethod::PowerIteration { tol, maxiter } => power_iteration(map, tol, *maxiter),
        EntropyMethod::CylinderCount { n } => cylinder_count(map, *n),
    }
}

fn markov_exact(map: &PLMap, bound: usize) -> Result<EntropyEstimate> {
    let MarkovOutcome::Markov(data) = detect_markov(map, bound) else {
        return Err(Error::unsupported(format!("map is not Markov within bound {bound}")));
    };
    let cp = data.incidence.charpoly();
    let k = cp.iter().take_while(|c| c.is_zero()).count();
    let reduced = QPoly::from_bigints(&cp[k..]);
    let s = if reduced.is_constant() { Scalar::zero() } else { largest_root(&reduced, &root_candidates(map))? };
    let (lo, hi) = s.refine_interval(&rat::pow2_inv(60));
    let h = if s.sign() > 0 { ln_scalar(&s) } else { (f64::NEG_INFINITY, f64::NEG_INFINITY) };
    Ok(EntropyEstimate {
        method: "markov_exact",
        s_exact: Some(s.clone()),
        s_bracket: (lo, Some(hi)),
        h_bracket: h,
        h_estimate: if s.sign() > 0 { s.to_f64().ln() } else { f64::NEG_INFINITY },
        iterations: 0,
        converged: true,
        counts: Vec::new(),
    })
}

/// Pointwise ratio bracket `min (Lf/f) ≤ s ≤ max (Lf/f)` over pieces where
/// `f > 0`. Valid because a scaling measure satisfies `μ(Lf) = s·μ(f)`.
fn ratio_bracket(f: &StepFunction, g: &StepFunction) -> (BigRational, Option<BigRational>) {
    let pairs = RefCell::new(Vec::new());
    f.zip_with(g, |a, b| {
        pairs.borrow_mut().push((a.clone(), b.clone()));
        Scalar::zero()
    });
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    let mut unbounded = false;
    for (a, b) in pairs.into_inner() {
        if a.is_zero() {
            // f = 0 where Lf > 0: no finite upper bound from this pair.
            unbounded |= !b.is_zero();
            continue;
        }
        let r = (b / a).as_rational().expect("integer-valued iterates").clone();
        lo = Some(lo.map_or(r.clone(), |l| l.min(r.clone())));
        hi = Some(hi.map_or(r.clone(), |h| h.max(r)));
    }
    (lo.unwrap_or_else(BigRational::zero), if unbounded { None } else { hi })
}

/// Power iteration with `M = I + L`, whose top eigenvalue is `1 + s`; the
/// shift makes the iteration converge for imprimitive maps as well.
fn power_iteration(map: &PLMap, tol: &BigRational, maxiter: usize) -> Result<EntropyEstimate> {
    if !tol.is_positive() {
        return Err(Error::invalid("tol", "tolerance must be positive"));
    }
    let ctx = TransferContext::new(map);
    let one = BigRational::one();
    let mut f = StepFunction::constant(Scalar::one());
    // Bracket for λ = 1 + s.
    let mut best: (BigRational, Option<BigRational>) = (one.clone(), None);
    for n in 1..=maxiter {
        let g = f.add(&ctx.apply(&f));
        let (lo, hi) = ratio_bracket(&f, &g);
        if lo > best.0 {
            best.0 = lo;
        }
        if let Some(h) = hi {
            if best.1.as_ref().is_none_or(|b| h < *b) {
                best.1 = Some(h);
            }
        }
        if let Some(h) = &best.1 {
            // ln(hi) − ln(lo) ≤ (hi − lo)/lo for the bracket of s.
            let s_lo = &best.0 - &one;
            if s_lo.is_positive() && (h - &best.0) <= tol * &s_lo {
                return Ok(finish_power(best, n, true));
            }
        }
        // Keep magnitudes small: rescale by an integer power of two lying near ‖g‖∞.
        let norm = g.supnorm();
        let shift = norm.as_rational().map(|r| r.numer().bits().saturating_sub(r.denom().bits())).unwrap_or(0);
        f = if shift > 64 {
            g.scale(&Scalar::Rational(BigRational::new(BigInt::one(), BigInt::one() << (shift - 32))))
        } else {
            g
        };
    }
    Ok(finish_power(best, maxiter, false))
}

fn finish_power(lambda: (BigRational, Option<BigRational>), n: usize, converged: bool) -> EntropyEstimate {
    let one = BigRational::one();
    let lo_s = (&lambda.0 - &one).max(BigRational::zero());
    let hi_s = lambda.1.as_ref().map(|h| h - &one);
    let lo = if lo_s.is_positive() { ln_bounds(&lo_s).0 } else { f64::NEG_INFINITY };
    let hi = hi_s.as_ref().map_or(f64::INFINITY, |h| ln_bounds(h).1);
    let estimate = match &hi_s {
        Some(h) if lo_s.is_positive() => rat::to_f64(&rat::midpoint(&lo_s, h)).ln(),
        _ => lo,
    };
    EntropyEstimate {
        method: "power_iteration",
        s_exact: None,
        s_bracket: (lo_s, hi_s),
        h_bracket: (lo, hi),
        h_estimate: estimate,
        iterations: n,
        converged,
        counts: Vec::new(),
    }
}

/// Number of nonempty cylinders (laps of τⁿ), by dynamic programming on the
/// images of cylinders.
pub fn cylinder_counts(map: &PLMap, n: usize) -> Vec<BigInt> {
    let mut images: BTreeMap<(Scalar, Scalar), BigInt> = BTreeMap::new();
    for i in 0..map.laps() {
        *images.entry(map.branch_image(i)).or_insert_with(BigInt::zero) += 1;
    }
    let mut counts = vec![images.values().sum()];
    for _ in 1..n {
        let mut next: BTreeMap<(Scalar, Scalar), BigInt> = BTreeMap::new();
        for ((c, d), cnt) in &images {
            for j in 0..map.laps() {
                let (a, b) = map.lap(j);
                let lo = c.clone().max(a.clone());
                let hi = d.clone().min(b.clone());
                if lo >= hi {
                    continue;
                }
                let br = &map.branches()[j];
                let (u, v) = (br.eval(&lo), br.eval(&hi));
                let key = if u <= v { (u, v) } else { (v, u) };
                *next.entry(key).or_insert_with(BigInt::zero) += cnt;
            }
        }
        images = next;
        counts.push(images.values().sum());
    }
    counts
}

fn cylinder_count(map: &PLMap, n: usize) -> Result<EntropyEstimate> {
    if n == 0 {
        return Err(Error::invalid("n", "cylinder length must be positive"));
    }
    let counts = cylinder_counts(map, n);
    let c = BigRational::from_integer(counts[n - 1].clone());
    let ub = ln_bounds(&c).1 / n as f64;
    let est = rat::to_f64(&c).ln() / n as f64;
    // Submultiplicativity gives h ≤ (1/n) ln c_n; round the s bound up.
    let s_hi = (est.exp() * (1.0 + 1e-12)).to_f64().unwrap_or(f64::INFINITY);
    let s_hi = BigRational::from_float(s_hi).unwrap_or_else(|| rat::int(i64::MAX));
    Ok(EntropyEstimate {
        method: "cylinder_count",
        s_exact: None,
        s_bracket: (BigRational::one(), Some(s_hi)),
        h_bracket: (0.0, ub),
        h_estimate: est,
        iterations: n,
        converged: true,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::AlgebraicContext;

    fn golden() -> Scalar {
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap())
    }

    #[test]
    fn tent_two_exact_and_power() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let e = entropy(&t, &EntropyMethod::MarkovExact, 64).unwrap();
        assert_eq!(e.s_exact, Some(Scalar::int(2)));
        let p = entropy(&t, &EntropyMethod::PowerIteration { tol: rat::frac(1, 1_000_000), maxiter: 200 }, 64).unwrap();
        assert!(p.converged);
        assert!(p.h_bracket.0 <= std::f64::consts::LN_2 && std::f64::consts::LN_2 <= p.h_bracket.1);
    }

    #[test]
    fn tent_nine_fifths_brackets_slope() {
        let t = PLMap::tent(&Scalar::frac(9, 5)).unwrap();
        let p = entropy(&t, &EntropyMethod::PowerIteration { tol: rat::frac(1, 1_000_000), maxiter: 500 }, 64).unwrap();
        assert!(p.s_bracket.0 <= rat::frac(9, 5));
        assert!(p.s_bracket.1.clone().unwrap() >= rat::frac(9, 5));
    }

    #[test]
    fn golden_cylinders_are_fibonacci() {
        let b = PLMap::beta(&golden()).unwrap();
        let counts = cylinder_counts(&b, 12);
        let fib: Vec<BigInt> = {
            let mut v = vec![BigInt::from(2), BigInt::from(3)];
            while v.len() < 12 {
                let n = &v[v.len() - 1] + &v[v.len() - 2];
                v.push(n);
            }
            v
        };
        assert_eq!(counts, fib);
        let e = entropy(&b, &EntropyMethod::CylinderCount { n: 12 }, 64).unwrap();
        let ln_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((e.h_estimate - ln_phi).abs() < 0.05);
        assert!(e.h_bracket.0 <= ln_phi && ln_phi <= e.h_bracket.1);
    }
}
