//! Presentations of dimension triples attached to a map.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use super::group::{
    class_component, combine_signs, ga_positive, ga_state, Basis, GAElement, MarkovLimit, OrderRule, Positivity,
    POSITIVITY_DEPTH,
};
use crate::decomposition::{exact_decomposition, transitivity_check, ExactDecomposition, Transitivity};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::map_model::{Direction, PLMap};
use crate::markov::{
    detect_markov, orbit_of, padic_infinite_orbit, perron_data, root_candidates, MarkovData, MarkovOutcome,
    OrbitStatus, PadicCertificate,
};
use crate::number::{scalar_to_json, Scalar};
use crate::symbolic::StepFunction;
use crate::transfer::TransferContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaurentOrder {
    /// Strict order by evaluation at `s`.
    StrictEval,
    /// Group structure only.
    Unordered,
}

/// `DG ≅ Z[t, t⁻¹]·generator` with `L_*` acting as multiplication by `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentCyclic {
    pub s: Scalar,
    pub generator: StepFunction,
    pub order: LaurentOrder,
}

/// `Σ cᵢ t^{low+i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentElement {
    pub low: i64,
    pub coeffs: Vec<BigInt>,
}

impl LaurentElement {
    pub fn from_i64(low: i64, coeffs: &[i64]) -> Self {
        LaurentElement { low, coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Multiplication by `t`.
    pub fn shift(&self) -> Self {
        LaurentElement { low: self.low + 1, coeffs: self.coeffs.clone() }
    }
}

impl LaurentCyclic {
    /// `p ↦ p(s)`.
    pub fn state(&self, p: &LaurentElement) -> Scalar {
        p.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| Scalar::from_bigint(c.clone()) * self.s.pow((p.low + i as i64) as i32))
            .sum()
    }

    pub fn positive(&self, p: &LaurentElement) -> Positivity {
        if p.is_zero() {
            return Positivity::Zero;
        }
        if self.order == LaurentOrder::Unordered {
            return Positivity::Undetermined;
        }
        match self.state(p).sign() {
            1 => Positivity::Positive,
            -1 => Positivity::Negative,
            _ => Positivity::Incomparable,
        }
    }

    /// `p(L)·generator` for `p` with no negative powers.
    pub fn realize(&self, map: &PLMap, p: &LaurentElement) -> Option<StepFunction> {
        if p.low < 0 {
            return None;
        }
        let ctx = TransferContext::new(map);
        let mut f = ctx.apply_n(&self.generator, p.low as usize);
        let mut parts = Vec::new();
        for c in &p.coeffs {
            parts.push(f.scale(&Scalar::from_bigint(c.clone())));
            f = ctx.apply(&f);
        }
        Some(StepFunction::sum_all(&parts))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "laurent_cyclic",
            "s": scalar_to_json(&self.s),
            "generator": self.generator.to_json(),
            "order": match self.order { LaurentOrder::StrictEval => "strict_eval", LaurentOrder::Unordered => "unordered" },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionTriple {
    MarkovLimit(MarkovLimit),
    LaurentCyclic(LaurentCyclic),
    /// `L_*` maps component `i` onto component `cycle[i]`.
    DirectSum { components: Vec<DimensionTriple>, cycle: Vec<usize>, part_masses: Vec<Scalar> },
}

impl DimensionTriple {
    pub fn kind(&self) -> &'static str {
        match self {
            DimensionTriple::MarkovLimit(_) => "markov_limit",
            DimensionTriple::LaurentCyclic(_) => "laurent_cyclic",
            DimensionTriple::DirectSum { .. } => "direct_sum",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DimensionTriple::MarkovLimit(m) => m.to_json(),
            DimensionTriple::LaurentCyclic(l) => l.to_json(),
            DimensionTriple::DirectSum { components, cycle, part_masses } => json!({
                "kind": "direct_sum",
                "N": components.len(),
                "cycle": cycle,
                "part_masses": part_masses.iter().map(scalar_to_json).collect::<Vec<_>>(),
                "components": components.iter().map(DimensionTriple::to_json).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Generators `J₁` (lap indicators) and `J₂` (jump intervals at discontinuities).
pub fn canonical_generators(map: &PLMap) -> Result<(Vec<StepFunction>, Vec<StepFunction>)> {
    if !map.classify().surjective_hat {
        return Err(Error::unsupported("map is not surjective"));
    }
    let j1 = (0..map.laps())
        .map(|i| {
            let (a, b) = map.lap(i);
            StepFunction::indicator(a, b)
        })
        .collect();
    let mut j2 = Vec::new();
    for k in 1..map.laps() {
        if let (Some(l), Some(r)) = map.limits_at(k) {
            if l != r {
                let (lo, hi) = if l < r { (l, r) } else { (r, l) };
                j2.push(StepFunction::indicator(&lo, &hi));
            }
        }
    }
    Ok((j1, j2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCheck {
    /// Endpoint with an infinite orbit whose removal leaves `τ̂(C∖{a}) ⊆ C`.
    pub endpoint: Option<Scalar>,
    /// Infinite-orbit proof, when a valuation argument applies.
    pub certificate: Option<PadicCertificate>,
    pub bound: usize,
}

impl CyclicCheck {
    pub fn holds(&self) -> bool {
        self.endpoint.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds(),
            "endpoint": self.endpoint.as_ref().map(scalar_to_json),
            "infinite_orbit_certificate": self.certificate.as_ref().map(PadicCertificate::to_json),
            "bound": self.bound,
        })
    }
}

/// Orbit condition for `DG ≅ Z[t,t⁻¹]`: an endpoint `a` with an orbit that
/// does not repeat within `bound`, and `τ̂(C∖{a}) ⊆ C` for the partition `C`.
pub fn cyclic_detect(map: &PLMap, bound: usize) -> CyclicCheck {
    let c = map.breakpoints();
    for a in [Scalar::one(), Scalar::zero()] {
        let (_, status) = orbit_of(map, a.clone(), bound);
        if !matches!(status, OrbitStatus::Open { .. }) {
            continue;
        }
        let closed = c.iter().filter(|x| **x != a).all(|x| {
            map.hat_image_point(x).map(|imgs| imgs.iter().all(|y| c.binary_search(y).is_ok())).unwrap_or(false)
        });
        if closed {
            let certificate = padic_infinite_orbit(map, &a, bound);
            return CyclicCheck { endpoint: Some(a), certificate, bound };
        }
    }
    CyclicCheck { endpoint: None, certificate: None, bound }
}

fn order_rule(data: &MarkovData) -> OrderRule {
    let p = &data.periodicity;
    if p.primitive {
        OrderRule::Strict
    } else if p.irreducible {
        OrderRule::Cyclic { period: p.period.expect("irreducible"), classes: p.classes.clone() }
    } else {
        OrderRule::Iterative { depth: POSITIVITY_DEPTH }
    }
}

/// Scale factor and state weights for the partition intervals.
fn markov_weights(map: &PLMap, data: &MarkovData) -> Result<(Scalar, Vec<Scalar>)> {
    if let Some(s) = map.uniform_slope() {
        let w = (0..data.size()).map(|i| {
            let (a, b) = data.interval(i);
            b - a
        });
        return Ok((s, w.collect()));
    }
    if !data.periodicity.irreducible {
        return Err(Error::unsupported("reducible incidence matrix and non-uniform slopes: no canonical state"));
    }
    let p = perron_data(&data.incidence, &root_candidates(map))?;
    Ok((p.s, p.right))
}

pub fn markov_limit_from(map: &PLMap, data: &MarkovData) -> Result<MarkovLimit> {
    if !data.eventually_surjective {
        return Err(Error::unsupported("Markov map is not eventually surjective"));
    }
    let (s, weights) = markov_weights(map, data)?;
    let basis = Basis::Intervals((0..data.size()).map(|i| {
        let (a, b) = data.interval(i);
        (a.clone(), b.clone())
    }).collect());
    Ok(MarkovLimit { a: data.incidence.clone(), s, weights, order: order_rule(data), basis })
}

pub fn markov_presentation(map: &PLMap, bound: usize) -> Result<MarkovLimit> {
    match detect_markov(map, bound) {
        MarkovOutcome::Markov(data) => markov_limit_from(map, &data),
        MarkovOutcome::NotMarkovWithinBound { bound, .. } => {
            Err(Error::unsupported(format!("map is not Markov within bound {bound}")))
        }
    }
}

/// `DG(τ) ≅ ⊕ DG(σᴺ|X_i)`, with each component presented by `A^N`
/// restricted to one cyclic class and its state renormalized by `1/μ(X_i)`.
pub fn direct_sum_decompose(map: &PLMap, dec: &ExactDecomposition, bound: usize) -> Result<DimensionTriple> {
    if dec.n == 1 {
        let whole = presentation(map, bound)?;
        return Ok(DimensionTriple::DirectSum { components: vec![whole], cycle: vec![0], part_masses: vec![Scalar::one()] });
    }
    let MarkovOutcome::Markov(data) = detect_markov(map, bound) else {
        return Err(Error::unsupported("component presentations need a Markov partition when N > 1"));
    };
    let full = markov_limit_from(map, &data)?;
    let OrderRule::Cyclic { period, classes } = &full.order else {
        return Err(Error::unsupported("incidence matrix is not irreducible with period N"));
    };
    if *period != dec.n {
        return Err(Error::unsupported("decomposition period disagrees with the incidence matrix"));
    }
    let an = full.a.pow(dec.n as u32);
    let mut components = Vec::new();
    let mut masses = Vec::new();
    for r in 0..dec.n {
        let idx: Vec<usize> = (0..full.size()).filter(|&i| classes[i] == r).collect();
        let rows: Vec<Vec<BigInt>> = idx.iter().map(|&i| idx.iter().map(|&j| an.get(i, j).clone()).collect()).collect();
        let mass: Scalar = idx.iter().map(|&i| full.weights[i].clone()).sum();
        let weights = idx.iter().map(|&i| &full.weights[i] / &mass).collect();
        let basis = match &full.basis {
            Basis::Intervals(iv) => Basis::Intervals(idx.iter().map(|&i| iv[i].clone()).collect()),
            other => other.clone(),
        };
        let comp = MarkovLimit {
            a: IntMatrix::new(rows),
            s: full.s.pow(dec.n as i32),
            weights,
            order: OrderRule::Strict,
            basis,
        };
        components.push(DimensionTriple::MarkovLimit(comp));
        masses.push(mass);
    }
    let cycle = (0..dec.n).map(|i| (i + 1) % dec.n).collect();
    Ok(DimensionTriple::DirectSum { components, cycle, part_masses: masses })
}

/// Extreme states `μ̃_r([v,n]) = s⁻ⁿ (v|class r+n)·w / μ(X_r)` of a cyclic limit.
pub fn component_states(t: &MarkovLimit, x: &GAElement) -> Vec<Scalar> {
    let OrderRule::Cyclic { period, classes } = &t.order else {
        return vec![ga_state(t, x)];
    };
    (0..*period)
        .map(|r| {
            let mass: Scalar =
                classes.iter().zip(&t.weights).filter(|(c, _)| **c == r).map(|(_, w)| w.clone()).sum();
            ga_state(t, &class_component(x, classes, *period, r)) / mass
        })
        .collect()
}

/// Product-cone sign of a cyclic limit, computed component by component.
pub fn componentwise_positive(t: &MarkovLimit, x: &GAElement) -> Positivity {
    match &t.order {
        OrderRule::Cyclic { period, classes } => {
            let signs: Vec<Positivity> = (0..*period)
                .map(|r| {
                    let strict = MarkovLimit { order: OrderRule::Strict, ..t.clone() };
                    ga_positive(&strict, &class_component(x, classes, *period, r))
                })
                .collect();
            combine_signs(&signs)
        }
        _ => ga_positive(t, x),
    }
}

fn is_unimodal(map: &PLMap) -> bool {
    map.laps() == 2 && map.classify().continuous && map.directions() == [Direction::Increasing, Direction::Decreasing]
}

pub fn unimodal_presentation(map: &PLMap, bound: usize) -> Result<DimensionTriple> {
    if !is_unimodal(map) {
        return Err(Error::unsupported("map is not unimodal"));
    }
    if let Transitivity::NotTransitive { .. } = transitivity_check(map, bound) {
        return Err(Error::unsupported("map is not transitive"));
    }
    presentation(map, bound)
}

/// Best available presentation: Markov limits (split into a direct sum when
/// the period exceeds 1), else the cyclic Laurent presentation when the
/// orbit condition holds for a uniform map. Without certified transitivity
/// the Laurent presentation carries no order.
pub fn presentation(map: &PLMap, bound: usize) -> Result<DimensionTriple> {
    match detect_markov(map, bound) {
        MarkovOutcome::Markov(data) => {
            let limit = markov_limit_from(map, &data)?;
            if let OrderRule::Cyclic { .. } = limit.order {
                let dec = exact_decomposition(map, bound)?;
                return direct_sum_decompose(map, &dec, bound);
            }
            Ok(DimensionTriple::MarkovLimit(limit))
        }
        MarkovOutcome::NotMarkovWithinBound { .. } => {
            let Some(s) = map.uniform_slope() else {
                return Err(Error::unsupported(
                    "map is neither Markov within the bound nor uniformly piecewise linear",
                ));
            };
            let transitive = matches!(transitivity_check(map, bound), Transitivity::Transitive { .. });
            let order = if transitive { LaurentOrder::StrictEval } else { LaurentOrder::Unordered };
            if (transitive && is_unimodal(map)) || cyclic_detect(map, bound).holds() {
                Ok(DimensionTriple::LaurentCyclic(LaurentCyclic {
                    s,
                    generator: StepFunction::constant(Scalar::one()),
                    order,
                }))
            } else {
                Err(Error::unsupported("no cyclic generator certified for this non-Markov map"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::group::ga_equal;
    use crate::number::{rat, AlgebraicContext};

    fn sqrt2() -> Scalar {
        let m: Vec<BigInt> = [-2, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap())
    }

    #[test]
    fn tent_two_markov_limit() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let m = markov_presentation(&t, 64).unwrap();
        assert_eq!(m.a, IntMatrix::from_i64(&[vec![1, 1], vec![1, 1]]));
        assert_eq!(m.weights, vec![Scalar::frac(1, 2); 2]);
        assert!(m.weights_are_eigenvector());
        assert!(matches!(unimodal_presentation(&t, 64).unwrap(), DimensionTriple::MarkovLimit(_)));
    }

    #[test]
    fn generators() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let (j1, j2) = canonical_generators(&t).unwrap();
        assert_eq!(j1.len(), 2);
        assert!(j2.is_empty());
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let phi = Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap());
        let b = PLMap::beta(&phi).unwrap();
        let (j1, j2) = canonical_generators(&b).unwrap();
        assert_eq!(j1[0], StepFunction::indicator(&Scalar::zero(), &(&phi - Scalar::one())));
        assert_eq!(j2, vec![StepFunction::constant(Scalar::one())]);
        assert!(canonical_generators(&PLMap::beta(&Scalar::frac(3, 2)).unwrap()).is_ok());
    }

    #[test]
    fn cyclic_condition() {
        assert!(cyclic_detect(&PLMap::beta(&Scalar::frac(3, 2)).unwrap(), 64).holds());
        assert!(!cyclic_detect(&PLMap::tent(&Scalar::int(2)).unwrap(), 64).holds());
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let phi = Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap());
        assert!(!cyclic_detect(&PLMap::beta(&phi).unwrap(), 64).holds());
    }

    #[test]
    fn tent_three_halves_infinitesimal() {
        let t = PLMap::tent(&Scalar::frac(3, 2)).unwrap();
        let DimensionTriple::LaurentCyclic(l) = unimodal_presentation(&t, 64).unwrap() else { panic!() };
        let p = LaurentElement::from_i64(0, &[-3, 2]);
        assert!(l.state(&p).is_zero());
        assert_eq!(l.positive(&p), Positivity::Incomparable);
        let h = l.realize(&t, &p).unwrap();
        assert!(!h.is_zero());
    }

    #[test]
    fn tent_sqrt2_direct_sum() {
        let r = sqrt2();
        let t = PLMap::tent(&r).unwrap();
        let DimensionTriple::DirectSum { components, cycle, part_masses } = unimodal_presentation(&t, 64).unwrap()
        else {
            panic!()
        };
        assert_eq!(cycle, vec![1, 0]);
        assert_eq!(components.len(), 2);
        let p = Scalar::int(2) - &r;
        assert_eq!(part_masses, vec![p.clone(), Scalar::one() - &p]);
        for c in &components {
            let DimensionTriple::MarkovLimit(m) = c else { panic!() };
            assert_eq!(m.s, Scalar::int(2));
            assert!(m.weights_are_eigenvector());
        }
        let full = markov_presentation(&t, 64).unwrap();
        // L_* carries class-0 vectors to class 1.
        let x = GAElement::from_i64(&[1, 0, 0], 0);
        let states = component_states(&full, &x);
        assert!(states[0].sign() > 0 && states[1].is_zero());
        let y = full.shift(&x);
        let states = component_states(&full, &y);
        assert!(states[0].is_zero() && states[1].sign() > 0);
        assert!(!ga_equal(&full, &x, &GAElement::zero(3)));
    }
}
