//! The β-transformation: itinerary of 1, the minimal polynomial of L on
//! `Z[t]·I(0,1)`, and the companion presentation of its dimension group.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::group::{Basis, MarkovLimit, OrderRule};
use super::presentation::{cyclic_detect, CyclicCheck, LaurentCyclic, LaurentOrder};
use crate::error::{Error, Result};
use crate::linalg::{rref, IntMatrix};
use crate::map_model::PLMap;
use crate::number::{scalar_to_json, Scalar};
use crate::symbolic::{MeasureWeights, StepFunction};
use crate::transfer::TransferContext;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaOrbit {
    /// `1, τ1, τ²1, …` up to the first repeat (exclusive) or the bound.
    pub points: Vec<Scalar>,
    /// Interval labels `n₀, n₁, …` of those points.
    pub digits: Vec<BigInt>,
    /// `(k, p)` with `τᵖ1 = τᵏ1` and `1, …, τ^{p-1}1` distinct.
    pub repeat: Option<(usize, usize)>,
}

impl BetaOrbit {
    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "digits": self.digits.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "repeat": self.repeat.map(|(k, p)| json!({"k": k, "p": p})),
        })
    }
}

/// Label of `x`: `⌊βx⌋` below 1, and `⌊β⌋` at 1 (the singleton `{1}` when β is an integer).
fn label(beta: &Scalar, x: &Scalar) -> BigInt {
    if x.is_one() {
        beta.floor()
    } else {
        (beta * x).floor()
    }
}

/// `τ(x) = βx mod 1`, with `τ(1)` the left limit.
fn beta_step(beta: &Scalar, x: &Scalar) -> Scalar {
    if x.is_one() {
        let n = beta.floor();
        let is_int = Scalar::from_bigint(n.clone()) == *beta;
        if is_int {
            Scalar::one()
        } else {
            beta - Scalar::from_bigint(n)
        }
    } else {
        beta * x - Scalar::from_bigint(label(beta, x))
    }
}

pub fn beta_itinerary(beta: &Scalar, bound: usize) -> BetaOrbit {
    let mut seen: HashMap<Scalar, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut digits = Vec::new();
    let mut x = Scalar::one();
    for i in 0..=bound {
        if let Some(&k) = seen.get(&x) {
            return BetaOrbit { points, digits, repeat: Some((k, i)) };
        }
        seen.insert(x.clone(), i);
        digits.push(label(beta, &x));
        points.push(x.clone());
        x = beta_step(beta, &x);
    }
    BetaOrbit { points, digits, repeat: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaCase {
    /// `τ1 = 1`.
    FixedOne,
    /// `τ1 ≠ 1`, `τᵖ1 ≠ 0`.
    Periodic { k: usize, p: usize },
    /// `τᵖ1 = 0`.
    EndsAtZero { k: usize, p: usize },
}

/// Exact checks behind a companion presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaChecks {
    /// `ψ(e_i·B) = L·ψ(e_i)` for every basis vector.
    pub intertwining: bool,
    /// `m(L)·I(0,1) = 0`.
    pub annihilates: bool,
    /// `I(0,1), …, L^{q-1}I(0,1)` are linearly independent.
    pub independent: bool,
    /// `det(tI − B) = m(t)`.
    pub charpoly_matches: bool,
    /// `∫ Lⁱ·I(0,1) = βⁱ`.
    pub state_values: bool,
}

impl BetaChecks {
    pub fn all(&self) -> bool {
        self.intertwining && self.annihilates && self.independent && self.charpoly_matches && self.state_values
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaPresentation {
    pub beta: Scalar,
    pub orbit: BetaOrbit,
    pub case: BetaCase,
    /// Minimal polynomial of L on `Z[t]·I(0,1)`, little-endian.
    pub m: Vec<BigInt>,
    /// Matrix of L in the basis `Lⁱ·I(0,1)` acting on row vectors.
    pub b: IntMatrix,
    /// State values `βⁱ` of the basis.
    pub state_basis: Vec<Scalar>,
    pub checks: BetaChecks,
}

impl BetaPresentation {
    pub fn limit(&self) -> MarkovLimit {
        MarkovLimit {
            a: self.b.clone(),
            s: self.beta.clone(),
            weights: self.state_basis.clone(),
            order: OrderRule::Strict,
            basis: Basis::PowersOfL,
        }
    }

    pub fn to_json(&self) -> Value {
        let case = match self.case {
            BetaCase::FixedOne => json!({"case": "fixed_one"}),
            BetaCase::Periodic { k, p } => json!({"case": "periodic", "k": k, "p": p}),
            BetaCase::EndsAtZero { k, p } => json!({"case": "ends_at_zero", "k": k, "p": p}),
        };
        json!({
            "beta": scalar_to_json(&self.beta),
            "orbit": self.orbit.to_json(),
            "case": case,
            "m": self.m.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "B": self.b.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "B_layout": "rows i < q-1 are e_{i+1}; last row holds the coefficients of L^q I(0,1) in the basis L^j I(0,1), j = 0..q-1",
            "state_basis": self.state_basis.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "checks": {
                "intertwining": self.checks.intertwining,
                "annihilates": self.checks.annihilates,
                "independent": self.checks.independent,
                "charpoly_matches": self.checks.charpoly_matches,
                "state_values": self.checks.state_values,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaOutcome {
    Companion(BetaPresentation),
    /// No repeat within the bound: the Laurent presentation.
    Fallback { orbit: BetaOrbit, laurent: LaurentCyclic, cyclic: CyclicCheck },
}

impl BetaOutcome {
    pub fn to_json(&self) -> Value {
        match self {
            BetaOutcome::Companion(p) => json!({"kind": "companion", "presentation": p.to_json()}),
            BetaOutcome::Fallback { orbit, laurent, cyclic } => json!({
                "kind": "fallback",
                "orbit_prefix": orbit.points.iter().take(16).map(scalar_to_json).collect::<Vec<_>>(),
                "presentation": laurent.to_json(),
                "cyclic": cyclic.to_json(),
            }),
        }
    }
}

/// `t^j − n₀t^{j-1} − ⋯ − n_{j-1}`, little-endian.
fn itinerary_poly(digits: &[BigInt], j: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); j + 1];
    p[j] = BigInt::one();
    for (i, d) in digits.iter().take(j).enumerate() {
        p[j - 1 - i] -= d;
    }
    p
}

/// Linear independence of step functions over the scalar field.
pub fn step_rank(fs: &[StepFunction]) -> usize {
    let mut cuts: Vec<Scalar> = fs.iter().flat_map(|f| f.cuts().iter().cloned()).collect();
    cuts.sort();
    cuts.dedup();
    let mut sample = vec![Scalar::zero()];
    sample.extend(cuts);
    let mut m: Vec<Vec<Scalar>> = sample.iter().map(|x| fs.iter().map(|f| f.value_right_of(x).clone()).collect()).collect();
    rref(&mut m).len()
}

pub fn beta_presentation(beta: &Scalar, bound: usize) -> Result<BetaOutcome> {
    if *beta <= Scalar::one() {
        return Err(Error::invalid("beta", "β must exceed 1"));
    }
    let map = PLMap::beta(beta)?;
    let orbit = beta_itinerary(beta, bound);
    let Some((k, p)) = orbit.repeat else {
        let cyclic = cyclic_detect(&map, bound);
        let laurent = LaurentCyclic {
            s: beta.clone(),
            generator: StepFunction::constant(Scalar::one()),
            order: LaurentOrder::StrictEval,
        };
        return Ok(BetaOutcome::Fallback { orbit, laurent, cyclic });
    };
    let digits = &orbit.digits;
    let (case, m) = if p == 1 {
        (BetaCase::FixedOne, vec![-digits[0].clone(), BigInt::one()])
    } else if orbit.points[k].is_zero() {
        (BetaCase::EndsAtZero { k, p }, itinerary_poly(digits, p - 1))
    } else {
        let pp = itinerary_poly(digits, p);
        let pk = itinerary_poly(digits, k);
        let mut m = pp;
        for (i, c) in pk.iter().enumerate() {
            m[i] -= c;
        }
        (BetaCase::Periodic { k, p }, m)
    };
    let q = m.len() - 1;
    // L^q I = Σ_j (−m_j) L^j I, so row q−1 of B holds −m_j in column j.
    let mut b = IntMatrix::zeros(q, q);
    for i in 0..q.saturating_sub(1) {
        b.set(i, i + 1, BigInt::one());
    }
    for j in 0..q {
        b.set(q - 1, j, -m[j].clone());
    }

    let ctx = TransferContext::new(&map);
    let mut powers = vec![StepFunction::constant(Scalar::one())];
    for _ in 0..q {
        let next = ctx.apply(powers.last().unwrap());
        powers.push(next);
    }
    let psi = |v: &[BigInt]| {
        let parts: Vec<StepFunction> =
            v.iter().zip(&powers).map(|(z, f)| f.scale(&Scalar::from_bigint(z.clone()))).collect();
        StepFunction::sum_all(&parts)
    };
    let intertwining = (0..q).all(|i| {
        let mut e = vec![BigInt::zero(); q];
        e[i] = BigInt::one();
        psi(&b.left_mul(&e)) == ctx.apply(&psi(&e))
    });
    let m_of_l: Vec<StepFunction> =
        m.iter().zip(&powers).map(|(c, f)| f.scale(&Scalar::from_bigint(c.clone()))).collect();
    let annihilates = StepFunction::sum_all(&m_of_l).is_zero();
    let independent = step_rank(&powers[..q]) == q;
    let charpoly_matches = b.charpoly() == m;
    let state_basis: Vec<Scalar> = (0..q).map(|i| beta.pow(i as i32)).collect();
    let leb = MeasureWeights::lebesgue();
    let state_values = powers[..q].iter().zip(&state_basis).all(|(f, v)| f.integrate(&leb) == *v);
    let checks = BetaChecks { intertwining, annihilates, independent, charpoly_matches, state_values };
    Ok(BetaOutcome::Companion(BetaPresentation { beta: beta.clone(), orbit, case, m, b, state_basis, checks }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{rat, AlgebraicContext};

    fn golden() -> Scalar {
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap())
    }

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn golden_orbit_and_polynomial() {
        let phi = golden();
        let o = beta_itinerary(&phi, 64);
        assert_eq!(o.points, vec![Scalar::one(), &phi - Scalar::one(), Scalar::zero()]);
        assert_eq!(o.repeat, Some((2, 3)));
        let BetaOutcome::Companion(p) = beta_presentation(&phi, 64).unwrap() else { panic!() };
        assert_eq!(p.case, BetaCase::EndsAtZero { k: 2, p: 3 });
        assert_eq!(p.m, ints(&[-1, -1, 1]));
        assert!(p.checks.all());
        assert_eq!(p.b, IntMatrix::from_i64(&[vec![0, 1], vec![1, 1]]));
    }

    #[test]
    fn integer_beta_is_case_one() {
        let BetaOutcome::Companion(p) = beta_presentation(&Scalar::int(2), 64).unwrap() else { panic!() };
        assert_eq!(p.case, BetaCase::FixedOne);
        assert_eq!(p.m, ints(&[-2, 1]));
        assert!(p.checks.all());
    }

    #[test]
    fn periodic_case_matches_displayed_polynomial() {
        // β = φ²: 1 ↦ β − 2 = 1/φ, a fixed point with digit 1.
        let ctx = AlgebraicContext::new(&ints(&[1, -3, 1]), rat::int(2), rat::int(3)).unwrap();
        let beta = Scalar::generator(&ctx);
        let BetaOutcome::Companion(p) = beta_presentation(&beta, 64).unwrap() else { panic!() };
        assert_eq!(p.case, BetaCase::Periodic { k: 1, p: 2 });
        assert_eq!(p.orbit.digits, ints(&[2, 1]));
        assert_eq!(p.m, ints(&[1, -3, 1]));
        assert!(p.checks.all(), "{:?}", p.checks);
        // Last row is (a_1, a_0) = (−1, 3), the reverse of the companion display.
        assert_eq!(p.b, IntMatrix::from_i64(&[vec![0, 1], vec![-1, 3]]));
    }

    #[test]
    fn three_halves_falls_back() {
        let out = beta_presentation(&Scalar::frac(3, 2), 64).unwrap();
        let BetaOutcome::Fallback { cyclic, laurent, .. } = out else { panic!() };
        assert!(cyclic.holds());
        assert_eq!(laurent.s, Scalar::frac(3, 2));
    }

    #[test]
    fn rejects_small_beta() {
        assert!(beta_presentation(&Scalar::one(), 8).is_err());
    }
}
