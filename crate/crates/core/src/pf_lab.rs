//! Perron–Frobenius iteration: limits of `(P^N)^k f`, the eigenfunctions
//! `φ_i` of the exactness decomposition, and the cyclic action `Pφ_i = φ_{i+1}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::decomposition::exact_decomposition;
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::map_model::{IntervalSet, PLMap};
use crate::markov::{detect_markov, scaling_measure, uniformize, MarkovOutcome, MeasureSource};
use crate::number::{scalar_to_json, Scalar};
use crate::symbolic::{MeasureWeights, StepFunction};
use crate::transfer::TransferContext;

#[derive(Clone, Debug)]
pub struct PFOptions {
    pub tol: BigRational,
    pub maxiter: usize,
    /// Cut count above which iterates are coarsened.
    pub cut_cap: usize,
}

impl Default for PFOptions {
    fn default() -> Self {
        PFOptions { tol: BigRational::new(BigInt::one(), BigInt::from(1_000_000)), maxiter: 200, cut_cap: 512 }
    }
}

/// Upper envelope pieces kept for the coarsening error bound.
const ENVELOPE_PIECES: usize = 16;

#[derive(Clone, Debug)]
pub struct PFRun {
    pub limit: StepFunction,
    /// `‖f_{k+1} − f_k‖∞` per iterate.
    pub trace: Vec<f64>,
    /// Total variation per iterate.
    pub var_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `μ(f)`, preserved by every iterate.
    pub mass: Scalar,
    /// Certified sup-norm bound on the drift from exact iteration caused by
    /// coarsening; zero when every iterate was exact.
    pub coarsening_bound: f64,
}

impl PFRun {
    /// Largest ratio of successive trace entries after the first two.
    pub fn observed_ratio(&self) -> Option<f64> {
        let ratios: Vec<f64> =
            self.trace.windows(2).skip(2).filter(|w| w[0] > 0.0 && w[1] > 0.0).map(|w| w[1] / w[0]).collect();
        ratios.into_iter().reduce(f64::max)
    }

    pub fn to_json(&self) -> Value {
        let sci = |x: &f64| format!("{x:.6e}");
        json!({
            "limit": self.limit.to_json(),
            "mass": scalar_to_json(&self.mass),
            "iterations": self.iterations,
            "converged": self.converged,
            "error_trace": self.trace.iter().map(sci).collect::<Vec<_>>(),
            "var_trace": self.var_trace.iter().map(sci).collect::<Vec<_>>(),
            "trace_precision": "7 significant digits",
            "observed_ratio": self.observed_ratio().as_ref().map(sci),
            "coarsening_bound": sci(&self.coarsening_bound),
        })
    }
}

fn below(x: &Scalar, tol: &BigRational) -> bool {
    (Scalar::Rational(tol.clone()) - x).sign() > 0
}

/// Merges runs of values spread by at most `δ`, doubling `δ` from `start`
/// up to `limit` until at most `cap/2` cuts remain; returns the coarsened
/// function and its sup-norm change `δ/2`.
fn coarsen(f: &StepFunction, cap: usize, start: &BigRational, limit: &BigRational) -> (StepFunction, BigRational) {
    let mut delta = start.clone();
    loop {
        let mut vals: Vec<Scalar> = Vec::new();
        let mut cuts: Vec<Scalar> = Vec::new();
        let (mut lo, mut hi) = (f.values()[0].clone(), f.values()[0].clone());
        for (k, v) in f.values().iter().enumerate().skip(1) {
            let (nlo, nhi) = (lo.clone().min(v.clone()), hi.clone().max(v.clone()));
            if below(&(&nhi - &nlo), &delta) || (&nhi - &nlo).sign() == 0 {
                lo = nlo;
                hi = nhi;
            } else {
                vals.push((&lo + &hi) / Scalar::int(2));
                cuts.push(f.cuts()[k - 1].clone());
                lo = v.clone();
                hi = v.clone();
            }
        }
        vals.push((&lo + &hi) / Scalar::int(2));
        if cuts.len() <= cap / 2 || &delta * BigRational::from_integer(BigInt::from(2)) > *limit {
            let g = StepFunction::new(cuts, vals).expect("subset of ordered cuts").normalize();
            return (g, &delta / BigRational::from_integer(BigInt::from(2)));
        }
        delta *= BigRational::from_integer(BigInt::from(2));
    }
}

/// Piecewise maximum over `pieces` consecutive groups of a nonnegative function.
fn upper_envelope(u: &StepFunction, pieces: usize) -> StepFunction {
    let n = u.values().len();
    if n <= pieces {
        return u.clone();
    }
    let chunk = n.div_ceil(pieces);
    let mut cuts = Vec::new();
    let mut vals = Vec::new();
    for (g, group) in u.values().chunks(chunk).enumerate() {
        if g > 0 {
            cuts.push(u.cuts()[g * chunk - 1].clone());
        }
        vals.push(group.iter().cloned().reduce(Scalar::max).expect("nonempty chunk"));
    }
    StepFunction::new(cuts, vals).expect("subset of ordered cuts").normalize()
}

/// Iterates `Q = (L/s)^N` from `f` until successive iterates differ by less
/// than `tol` in sup norm. Masses are taken against Lebesgue measure, so `map`
/// should be uniformly piecewise linear with slope `±s`.
pub fn pf_limit(map: &PLMap, f: &StepFunction, s: &Scalar, n: usize, opts: &PFOptions) -> Result<PFRun> {
    let ctx = TransferContext::new(map);
    let q = |g: &StepFunction| -> Result<StepFunction> {
        let mut h = g.clone();
        for _ in 0..n {
            h = ctx.pf_apply(&h, s)?;
        }
        Ok(h)
    };
    let mass = f.integrate(&MeasureWeights::lebesgue());
    let mut cur = f.clone();
    let mut trace = Vec::new();
    let mut var_trace = vec![cur.var().to_f64()];
    let mut envelope = StepFunction::zero();
    let step_err = &opts.tol / BigRational::from_integer(BigInt::from(64));
    let max_err = &opts.tol / BigRational::from_integer(BigInt::from(4));
    for k in 0..opts.maxiter {
        let mut next = q(&cur)?;
        if !envelope.is_zero() {
            envelope = upper_envelope(&q(&envelope)?, ENVELOPE_PIECES);
        }
        if next.cuts().len() > opts.cut_cap {
            let (c, err) = coarsen(&next, opts.cut_cap, &step_err, &max_err);
            next = c;
            envelope = envelope.add(&StepFunction::constant(Scalar::Rational(err)));
        }
        let d = next.sub(&cur).supnorm();
        trace.push(d.to_f64());
        var_trace.push(next.var().to_f64());
        cur = next;
        if d.is_zero() || below(&d, &opts.tol) {
            return Ok(PFRun {
                limit: cur,
                trace,
                var_trace,
                iterations: k + 1,
                converged: true,
                mass,
                coarsening_bound: envelope.supnorm().to_f64(),
            });
        }
    }
    Ok(PFRun {
        limit: cur,
        trace,
        var_trace,
        iterations: opts.maxiter,
        converged: false,
        mass,
        coarsening_bound: envelope.supnorm().to_f64(),
    })
}

/// Exact `φ` with `Pᴺφ = φ`, `supp φ ⊆ part`, `∫φ = 1`, by a linear solve on
/// the Markov partition span, where `L` acts on coefficients as `c ↦ cA`.
pub fn markov_fixed_point(map: &PLMap, s: &Scalar, n: usize, part: &IntervalSet, bound: usize) -> Option<StepFunction> {
    let MarkovOutcome::Markov(data) = detect_markov(map, bound) else { return None };
    let idx: Vec<usize> = (0..data.size())
        .filter(|&i| {
            let (a, b) = data.interval(i);
            part.contains_set(&IntervalSet::interval(a.clone(), b.clone()))
        })
        .collect();
    if idx.is_empty() {
        return None;
    }
    let an = data.incidence.pow(n as u32);
    let sn = s.pow(n as i32);
    // Unknowns c_j (j ∈ idx); equations Σ_j c_j A^N_{jk} − s^N c_k = 0 and Σ c_j μ(E_j) = 1.
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs = Vec::new();
    for &k in &idx {
        rows.push(
            idx.iter()
                .map(|&j| {
                    let a = Scalar::from_bigint(an.get(j, k).clone());
                    if j == k { a - &sn } else { a }
                })
                .collect(),
        );
        rhs.push(Scalar::zero());
    }
    rows.push(idx.iter().map(|&j| {
        let (a, b) = data.interval(j);
        b - a
    }).collect());
    rhs.push(Scalar::one());
    let c = solve(&rows, &rhs)?;
    let parts: Vec<StepFunction> = idx
        .iter()
        .zip(&c)
        .map(|(&j, cj)| {
            let (a, b) = data.interval(j);
            StepFunction::indicator_scaled(a, b, cj.clone())
        })
        .collect();
    Some(StepFunction::sum_all(&parts))
}

#[derive(Clone, Debug)]
pub struct PFReport {
    pub n: usize,
    /// Uniformly piecewise linear model the iteration ran on.
    pub model: PLMap,
    /// Whether `model` is the input map or its uniformization.
    pub uniformized: bool,
    pub s: Scalar,
    pub parts: Vec<IntervalSet>,
    pub phi: Vec<StepFunction>,
    pub runs: Vec<PFRun>,
    pub support_min: Vec<Option<Scalar>>,
    /// Exact eigenfunctions from the Markov linear solve.
    pub exact_phi: Option<Vec<StepFunction>>,
}

impl PFReport {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "coordinates": if self.uniformized { "uniform_model" } else { "input" },
            "model": self.model.to_json(),
            "s": scalar_to_json(&self.s),
            "parts": self.parts.iter().map(IntervalSet::to_json).collect::<Vec<_>>(),
            "runs": self.runs.iter().map(PFRun::to_json).collect::<Vec<_>>(),
            "support_min": self.support_min.iter().map(|m| m.as_ref().map(scalar_to_json)).collect::<Vec<_>>(),
            "exact_phi": self.exact_phi.as_ref().map(|v| v.iter().map(StepFunction::to_json).collect::<Vec<_>>()),
        })
    }
}

/// Eigenfunctions `φ_i = lim (Pᴺ)^k χ_{X_i}/μ(X_i)` for every part of the
/// exactness decomposition.
pub fn pf_eigenfunctions(map: &PLMap, bound: usize, opts: &PFOptions) -> Result<PFReport> {
    let measure = scaling_measure(map, bound)?;
    let (model, uniformized) = match measure.source {
        MeasureSource::Lebesgue => (map.clone(), false),
        MeasureSource::Perron => (uniformize(map, &measure.weights, &measure.s)?, true),
    };
    let s = measure.s.clone();
    let dec = exact_decomposition(&model, bound)?;
    let mut runs = Vec::new();
    for part in &dec.parts {
        let f = StepFunction::indicator_of_set(part).scale(&(Scalar::one() / part.measure()));
        runs.push(pf_limit(&model, &f, &s, dec.n, opts)?);
    }
    let phi: Vec<StepFunction> = runs.iter().map(|r| r.limit.clone()).collect();
    let support_min = phi.iter().map(StepFunction::min_on_support).collect();
    let exact_phi: Option<Vec<StepFunction>> =
        dec.parts.iter().map(|p| markov_fixed_point(&model, &s, dec.n, p, bound)).collect();
    Ok(PFReport { n: dec.n, model, uniformized, s, parts: dec.parts, phi, runs, support_min, exact_phi })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleVerdict {
    pub clauses: Vec<Clause>,
}

impl CycleVerdict {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Clause> {
        self.clauses.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "clauses": self.clauses.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }
}

/// Checks `‖Pφ_i − φ_{i+1}‖∞ < tol`, one eigenfunction per part, positivity
/// on supports, supports equal to the parts, and the exact cycle when known.
pub fn pf_verify_cycle(report: &PFReport, tol: &BigRational) -> Result<CycleVerdict> {
    let ctx = TransferContext::new(&report.model);
    let n = report.n;
    let mut clauses = Vec::new();
    let mut worst = Scalar::zero();
    for i in 0..n {
        let d = ctx.pf_apply(&report.phi[i], &report.s)?.sub(&report.phi[(i + 1) % n]).supnorm();
        worst = worst.max(d);
    }
    clauses.push(Clause {
        name: "cycle",
        pass: below(&worst, tol) || worst.is_zero(),
        detail: format!("max ‖Pφ_i − φ_(i+1)‖ ≈ {:.3e}", worst.to_f64()),
    });
    let disjoint = (0..n).all(|i| (i + 1..n).all(|j| !report.phi[i].support().interiors_meet(&report.phi[j].support())));
    clauses.push(Clause {
        name: "count",
        pass: report.phi.len() == n && disjoint,
        detail: format!("{} eigenfunctions, N = {n}", report.phi.len()),
    });
    let margin = Scalar::Rational(tol.clone());
    let positive = report.support_min.iter().all(|m| m.as_ref().is_some_and(|m| (m - &margin).sign() > 0));
    clauses.push(Clause {
        name: "positivity",
        pass: positive,
        detail: report
            .support_min
            .iter()
            .map(|m| m.as_ref().map_or("none".to_string(), |m| format!("{:.6}", m.to_f64())))
            .collect::<Vec<_>>()
            .join(", "),
    });
    let supports_match = report.phi.iter().zip(&report.parts).all(|(f, p)| f.support() == *p);
    clauses.push(Clause { name: "support", pass: supports_match, detail: "supp φ_i = X_i".into() });
    if let Some(exact) = &report.exact_phi {
        let mut exact_ok = true;
        for i in 0..n {
            let r = ctx.pf_apply(&exact[i], &report.s)?.sub(&exact[(i + 1) % n]);
            exact_ok &= r.is_zero();
        }
        clauses.push(Clause { name: "exact_cycle", pass: exact_ok, detail: "Pφ_i = φ_(i+1) exactly".into() });
    }
    if report.phi.is_empty() {
        return Err(Error::unsupported("no eigenfunctions to verify"));
    }
    Ok(CycleVerdict { clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{rat, AlgebraicContext};

    fn golden() -> Scalar {
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap())
    }

    #[test]
    fn tent_two_half_indicator_flattens() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let f = StepFunction::indicator(&Scalar::zero(), &Scalar::frac(1, 2));
        let r = pf_limit(&t, &f, &Scalar::int(2), 1, &PFOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.limit, StepFunction::constant(Scalar::frac(1, 2)));
        assert_eq!(r.mass, Scalar::frac(1, 2));
    }

    #[test]
    fn zero_is_fixed() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let r = pf_limit(&t, &StepFunction::zero(), &Scalar::int(2), 1, &PFOptions::default()).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(r.limit.is_zero());
    }

    #[test]
    fn golden_beta_density() {
        let phi = golden();
        let b = PLMap::beta(&phi).unwrap();
        let rep = pf_eigenfunctions(&b, 64, &PFOptions::default()).unwrap();
        assert_eq!(rep.n, 1);
        let exact = &rep.exact_phi.as_ref().unwrap()[0];
        let sqrt5 = Scalar::int(2) * &phi - Scalar::one();
        let hi = (Scalar::int(5) + Scalar::int(3) * &sqrt5) / Scalar::int(10);
        let lo = (Scalar::int(5) + &sqrt5) / Scalar::int(10);
        let inv = Scalar::one() / &phi;
        let expect = StepFunction::indicator_scaled(&Scalar::zero(), &inv, hi)
            .add(&StepFunction::indicator_scaled(&inv, &Scalar::one(), lo));
        assert_eq!(*exact, expect);
        let d = rep.phi[0].sub(exact).supnorm();
        assert!(d.to_f64() < 1e-5);
        assert!(rep.runs[0].observed_ratio().unwrap() < 0.7);
        assert!(pf_verify_cycle(&rep, &rat::frac(1, 1_000_000)).unwrap().pass());
    }

    #[test]
    fn sqrt_two_tent_swaps_eigenfunctions() {
        let m: Vec<BigInt> = [-2, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let r = Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap());
        let t = PLMap::tent(&r).unwrap();
        let rep = pf_eigenfunctions(&t, 64, &PFOptions::default()).unwrap();
        assert_eq!(rep.n, 2);
        let v = pf_verify_cycle(&rep, &rat::frac(1, 1_000_000)).unwrap();
        assert!(v.pass(), "{:?}", v.failures());
        let p = Scalar::int(2) - &r;
        let exact = rep.exact_phi.unwrap();
        assert_eq!(exact[0], StepFunction::indicator_scaled(&Scalar::zero(), &p, Scalar::one() / &p));
    }

    #[test]
    fn coarsening_keeps_a_certified_bound() {
        let t = PLMap::tent(&Scalar::frac(3, 2)).unwrap();
        let opts = PFOptions { cut_cap: 16, ..PFOptions::default() };
        let r = pf_limit(&t, &StepFunction::constant(Scalar::one()), &Scalar::frac(3, 2), 1, &opts).unwrap();
        assert!(r.converged);
        assert!(r.limit.cuts().len() < 62);
        assert!(r.coarsening_bound > 0.0 && r.coarsening_bound < 1e-4, "{} {} {}", r.iterations, r.limit.cuts().len(), r.coarsening_bound);
        assert_eq!(r.mass, Scalar::one());
    }
}
