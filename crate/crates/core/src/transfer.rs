//! The transfer map `(Lf)(x) = Σ_{σy=x} f(y)` and `P = L/s` on step functions,
//! plus the dimension-group equivalence test.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{solve, IntMatrix};
use crate::map_model::{Direction, PLMap};
use crate::number::{QPoly, Scalar};
use crate::symbolic::{MeasureWeights, OrderInterval, StepFunction};

/// Branch data for evaluating L by pushing pieces forward through each lap.
#[derive(Clone, Debug)]
pub struct TransferContext {
    map: PLMap,
    domains: Vec<OrderInterval>,
    images: Vec<OrderInterval>,
}

impl TransferContext {
    pub fn new(map: &PLMap) -> Self {
        let domains = (0..map.laps())
            .map(|i| {
                let (a, b) = map.lap(i);
                OrderInterval::clopen(a.clone(), b.clone()).expect("laps have positive length")
            })
            .collect();
        let images = (0..map.laps())
            .map(|i| {
                let (a, b) = map.branch_image(i);
                OrderInterval::clopen(a, b).expect("branches are nonconstant")
            })
            .collect();
        TransferContext { map: map.clone(), domains, images }
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    /// Clopen domains `J_i`.
    pub fn domains(&self) -> &[OrderInterval] {
        &self.domains
    }

    /// Images `σ(J_i)`.
    pub fn images(&self) -> &[OrderInterval] {
        &self.images
    }

    /// Inverse branch `ψ_i` evaluated at `y`.
    pub fn psi(&self, i: usize, y: &Scalar) -> Scalar {
        self.map.branches()[i].inverse(y)
    }

    /// Contribution `(f∘ψ_i)·χ_{σ(J_i)}` of lap `i`.
    fn branch_part(&self, i: usize, f: &StepFunction) -> StepFunction {
        let (a, b) = self.map.lap(i);
        let br = &self.map.branches()[i];
        // Pieces of f restricted to [a, b].
        let mut xs = vec![a.clone()];
        let mut vals = Vec::new();
        let cuts = f.cuts();
        let start = cuts.partition_point(|c| c <= a);
        vals.push(f.values()[start].clone());
        let mut k = start;
        while k < cuts.len() && cuts[k] < *b {
            xs.push(cuts[k].clone());
            vals.push(f.values()[k + 1].clone());
            k += 1;
        }
        xs.push(b.clone());
        let mut ys: Vec<Scalar> = xs.iter().map(|x| br.eval(x)).collect();
        if br.direction() == Direction::Decreasing {
            ys.reverse();
            vals.reverse();
        }
        let (zero, one) = (Scalar::zero(), Scalar::one());
        let mut out_cuts = Vec::with_capacity(ys.len());
        let mut out_vals = Vec::with_capacity(vals.len() + 2);
        if ys[0] > zero {
            out_cuts.push(ys[0].clone());
            out_vals.push(Scalar::zero());
        }
        for (j, v) in vals.into_iter().enumerate() {
            if j > 0 {
                out_cuts.push(ys[j].clone());
            }
            out_vals.push(v);
        }
        let last = ys.last().unwrap();
        if *last < one {
            out_cuts.push(last.clone());
            out_vals.push(Scalar::zero());
        }
        StepFunction::new(out_cuts, out_vals).expect("pushed-forward cuts stay ordered inside (0,1)")
    }

    /// `Lf = Σ_i (f∘ψ_i)·χ_{σ(J_i)}`.
    pub fn apply(&self, f: &StepFunction) -> StepFunction {
        if f.is_zero() {
            return StepFunction::zero();
        }
        let parts: Vec<StepFunction> = (0..self.map.laps()).map(|i| self.branch_part(i, f)).collect();
        StepFunction::sum_all(&parts)
    }

    /// `Lⁿf`.
    pub fn apply_n(&self, f: &StepFunction, n: usize) -> StepFunction {
        let mut g = f.clone();
        for _ in 0..n {
            g = self.apply(&g);
        }
        g
    }

    /// `Pf = (1/s)·Lf`.
    pub fn pf_apply(&self, f: &StepFunction, s: &Scalar) -> Result<StepFunction> {
        if s.sign() <= 0 {
            return Err(Error::invalid("s", "scaling factor must be positive"));
        }
        Ok(self.apply(f).scale(&(Scalar::one() / s)))
    }

    /// `p(L)·f` for a polynomial `p` with rational coefficients.
    pub fn apply_poly(&self, p: &QPoly, f: &StepFunction) -> StepFunction {
        let mut acc = StepFunction::zero();
        let mut power = f.clone();
        for (k, c) in p.coeffs().iter().enumerate() {
            if k > 0 {
                power = self.apply(&power);
            }
            if !num_traits::Zero::is_zero(c) {
                acc = acc.add(&power.scale(&Scalar::Rational(c.clone())));
            }
        }
        acc
    }
}

/// `Lf` for a one-off application.
pub fn transfer_apply(ctx: &TransferContext, f: &StepFunction) -> StepFunction {
    ctx.apply(f)
}

/// `Pf = (1/s)·Lf`.
pub fn pf_apply(ctx: &TransferContext, f: &StepFunction, s: &Scalar) -> Result<StepFunction> {
    ctx.pf_apply(f, s)
}

/// Markov partition data usable as an equivalence certificate.
#[derive(Clone, Debug)]
pub struct MarkovHint {
    /// Partition points `B`, including 0 and 1.
    pub points: Vec<Scalar>,
    pub incidence: IntMatrix,
}

impl MarkovHint {
    /// Coordinates of `f` in the basis of partition indicators, if it lies in their span.
    pub fn coordinates(&self, f: &StepFunction) -> Option<Vec<Scalar>> {
        let inner = &self.points[1..self.points.len() - 1];
        if !f.cuts().iter().all(|c| inner.binary_search(c).is_ok()) {
            return None;
        }
        Some((0..self.points.len() - 1).map(|i| f.value_right_of(&self.points[i]).clone()).collect())
    }
}

/// Extra knowledge that lets `dg_equivalent` certify inequivalence.
#[derive(Clone, Debug, Default)]
pub struct EquivalenceHints {
    /// A measure scaled by L (so `μ(Lf) = s·μ(f)`).
    pub scaled_measure: Option<MeasureWeights>,
    pub markov: Option<MarkovHint>,
    /// Set when `{Lᵏ·1}` is certified linearly independent modulo ∼
    /// (infinite critical orbit in the cyclic case).
    pub laurent_generator: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistinctCertificate {
    /// The scaled state is nonzero on `f − g`.
    NonzeroState(Scalar),
    /// `f − g` reached the Markov span with coordinates `v` and `v·A^q ≠ 0`.
    MarkovKernel { step: usize },
    /// `f − g = p(L)·1` with `p ≠ 0` in a cyclic Laurent module.
    LaurentIndependent { poly: Vec<Scalar> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal(usize),
    Distinct { certificate: DistinctCertificate, state_zero: bool },
    Undetermined { bound: usize },
}

impl Equivalence {
    pub fn to_json(&self) -> Value {
        match self {
            Equivalence::Equal(n) => json!({"verdict": "equal", "n": n}),
            Equivalence::Distinct { certificate, state_zero } => {
                let cert = match certificate {
                    DistinctCertificate::NonzeroState(x) => {
                        json!({"kind": "nonzero_state", "state": crate::number::scalar_to_json(x)})
                    }
                    DistinctCertificate::MarkovKernel { step } => json!({"kind": "markov_kernel", "step": step}),
                    DistinctCertificate::LaurentIndependent { poly } => json!({
                        "kind": "laurent_independent",
                        "poly": poly.iter().map(crate::number::scalar_to_json).collect::<Vec<_>>(),
                    }),
                };
                json!({"verdict": "distinct", "certificate": cert, "infinitesimal": state_zero})
            }
            Equivalence::Undetermined { bound } => json!({"verdict": "undetermined", "bound": bound}),
        }
    }
}

/// Writes `h = Σ c_k Lᵏ·1` for `k < max_degree`, if possible.
pub fn laurent_coordinates(ctx: &TransferContext, h: &StepFunction, max_degree: usize) -> Option<Vec<Scalar>> {
    let mut basis = vec![StepFunction::constant(Scalar::one())];
    for k in 0..max_degree {
        let mut all_cuts: Vec<Scalar> = h.cuts().to_vec();
        for b in &basis {
            all_cuts.extend(b.cuts().iter().cloned());
        }
        all_cuts.sort();
        all_cuts.dedup();
        let mut sample = vec![Scalar::zero()];
        sample.extend(all_cuts.iter().cloned());
        let rows: Vec<Vec<Scalar>> =
            sample.iter().map(|x| basis.iter().map(|b| b.value_right_of(x).clone()).collect()).collect();
        let rhs: Vec<Scalar> = sample.iter().map(|x| h.value_right_of(x).clone()).collect();
        if let Some(c) = solve(&rows, &rhs) {
            return Some(c);
        }
        if k + 1 < max_degree {
            let next = ctx.apply(basis.last().unwrap());
            basis.push(next);
        }
    }
    None
}

/// Decides `f ∼ g` (some `Lⁿf = Lⁿg`) within `bound` iterations, certifying
/// inequivalence through `hints` where possible.
pub fn dg_equivalent(
    ctx: &TransferContext,
    f: &StepFunction,
    g: &StepFunction,
    bound: usize,
    hints: &EquivalenceHints,
) -> Result<Equivalence> {
    if !f.is_integer_valued() || !g.is_integer_valued() {
        return Err(Error::invalid("f", "dimension-group elements must be integer valued"));
    }
    let mut h = f.sub(g);
    if h.is_zero() {
        return Ok(Equivalence::Equal(0));
    }
    let mut state_zero = false;
    if let Some(mu) = &hints.scaled_measure {
        let st = h.integrate(mu);
        if !st.is_zero() {
            return Ok(Equivalence::Distinct { certificate: DistinctCertificate::NonzeroState(st), state_zero: false });
        }
        state_zero = true;
    }
    if hints.laurent_generator {
        if let Some(c) = laurent_coordinates(ctx, &h, 24) {
            if c.iter().any(|x| !x.is_zero()) {
                return Ok(Equivalence::Distinct {
                    certificate: DistinctCertificate::LaurentIndependent { poly: c },
                    state_zero,
                });
            }
        }
    }
    for n in 0..=bound {
        if h.is_zero() {
            return Ok(Equivalence::Equal(n));
        }
        if let Some(mk) = &hints.markov {
            if let Some(v) = mk.coordinates(&h) {
                let q = mk.incidence.nrows();
                let mut w: Vec<BigInt> = v.iter().map(|x| x.as_integer().expect("integer valued")).collect();
                for k in 1..=q {
                    w = mk.incidence.left_mul(&w);
                    if w.iter().all(num_traits::Zero::is_zero) {
                        return Ok(Equivalence::Equal(n + k));
                    }
                }
                return Ok(Equivalence::Distinct {
                    certificate: DistinctCertificate::MarkovKernel { step: n },
                    state_zero,
                });
            }
        }
        if n < bound {
            h = ctx.apply(&h);
        }
    }
    Ok(Equivalence::Undetermined { bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::frac(p, d)
    }

    fn one() -> StepFunction {
        StepFunction::constant(Scalar::one())
    }

    #[test]
    fn tent_doubles_constants() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let ctx = TransferContext::new(&t);
        assert_eq!(ctx.apply(&one()), StepFunction::constant(Scalar::int(2)));
        assert_eq!(ctx.pf_apply(&one(), &Scalar::int(2)).unwrap(), one());
        assert!(ctx.apply(&StepFunction::zero()).is_zero());
    }

    #[test]
    fn tent_halves_are_equivalent() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let ctx = TransferContext::new(&t);
        let f = StepFunction::indicator(&Scalar::zero(), &q(1, 2));
        let g = StepFunction::indicator(&q(1, 2), &Scalar::one());
        assert_eq!(dg_equivalent(&ctx, &f, &g, 8, &EquivalenceHints::default()).unwrap(), Equivalence::Equal(1));
        assert_eq!(dg_equivalent(&ctx, &f, &f, 8, &EquivalenceHints::default()).unwrap(), Equivalence::Equal(0));
        let err = dg_equivalent(&ctx, &f.scale(&q(1, 2)), &g, 8, &EquivalenceHints::default());
        assert!(err.is_err());
    }

    #[test]
    fn laurent_coordinates_recover_polynomial() {
        let t = PLMap::tent(&q(3, 2)).unwrap();
        let ctx = TransferContext::new(&t);
        let h = ctx.apply(&one()).scale(&Scalar::int(2)).sub(&one().scale(&Scalar::int(3)));
        assert_eq!(laurent_coordinates(&ctx, &h, 6).unwrap(), vec![Scalar::int(-3), Scalar::int(2)]);
    }
}
