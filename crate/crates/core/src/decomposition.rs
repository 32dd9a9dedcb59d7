//! Transitivity, exactness, and the cyclic decomposition into exact pieces.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::map_model::{IntervalSet, PLMap};
use crate::markov::{critical_orbits, detect_markov, MarkovOutcome};
use crate::number::Scalar;

/// Step cap for image chains.
pub const MAX_STEPS: usize = 1 << 10;
/// Component cap for interval sets along a chain.
pub const MAX_COMPONENTS: usize = 4096;
/// Critical-orbit depth used to cut `[0,1]` into seed intervals.
pub const SEED_DEPTH: usize = 4;
/// Largest period tried by the non-Markov decomposition route.
pub const MAX_PERIOD: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transitivity {
    /// Every seed's cumulative image chain covered `[0,1]`; `steps` is the
    /// longest chain needed.
    Transitive { seeds: usize, steps: usize },
    /// A proper closed forward-invariant set with nonempty interior.
    NotTransitive { witness: IntervalSet },
    Undetermined { bound: usize },
}

impl Transitivity {
    pub fn to_json(&self) -> Value {
        match self {
            Transitivity::Transitive { seeds, steps } => {
                json!({"verdict": "transitive", "certified": true, "seeds": seeds, "steps": steps})
            }
            Transitivity::NotTransitive { witness } => {
                json!({"verdict": "not_transitive", "certified": true, "witness": witness.to_json()})
            }
            Transitivity::Undetermined { bound } => json!({"verdict": "undetermined", "bound": bound}),
        }
    }
}

/// Gaps between consecutive points of breakpoints together with the first
/// `depth` iterates of every critical orbit.
pub fn seed_intervals(map: &PLMap, depth: usize) -> Vec<IntervalSet> {
    let table = critical_orbits(map, depth);
    let mut pts: Vec<Scalar> = map.breakpoints().to_vec();
    for o in &table.orbits {
        pts.extend(o.iterates.iter().take(depth + 1).cloned());
    }
    pts.sort();
    pts.dedup();
    pts.windows(2).map(|w| IntervalSet::interval(w[0].clone(), w[1].clone())).collect()
}

enum Chain {
    Stable { set: IntervalSet, steps: usize },
    Exhausted,
}

/// `C_{k+1} = C_k ∪ g(C_k)` until it stops changing.
fn cumulative(seed: &IntervalSet, limit: usize, g: impl Fn(&IntervalSet) -> IntervalSet) -> Chain {
    let mut c = seed.clone();
    for k in 0..limit {
        let next = c.union(&g(&c));
        if next.len() > MAX_COMPONENTS {
            return Chain::Exhausted;
        }
        if next == c {
            return Chain::Stable { set: c, steps: k };
        }
        c = next;
    }
    Chain::Exhausted
}

fn image_power(map: &PLMap, s: &IntervalSet, n: usize) -> IntervalSet {
    (0..n).fold(s.clone(), |acc, _| map.regular_image_set(&acc))
}

pub fn transitivity_check(map: &PLMap, bound: usize) -> Transitivity {
    let limit = bound.clamp(1, MAX_STEPS);
    let seeds = seed_intervals(map, SEED_DEPTH.min(bound));
    let mut witness: Option<IntervalSet> = None;
    let mut steps = 0;
    let mut open = false;
    for seed in &seeds {
        match cumulative(seed, limit, |c| map.regular_image_set(c)) {
            Chain::Stable { set, steps: k } if set.is_unit() => steps = steps.max(k),
            Chain::Stable { set, .. } => {
                if witness.as_ref().is_none_or(|w| set.measure() < w.measure()) {
                    witness = Some(set);
                }
            }
            Chain::Exhausted => open = true,
        }
    }
    match witness {
        Some(witness) => Transitivity::NotTransitive { witness },
        None if open => Transitivity::Undetermined { bound: limit },
        None => Transitivity::Transitive { seeds: seeds.len(), steps },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Markov,
    Iteration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDecomposition {
    pub n: usize,
    /// `K_1, …, K_N` with `τ̂(K_i) = K_{i+1 mod N}`; `K_1` contains `0`.
    pub parts: Vec<IntervalSet>,
    pub route: Route,
    /// All structural clauses and the covering check on each part succeeded.
    pub certified: bool,
}

impl ExactDecomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "parts": self.parts.iter().map(IntervalSet::to_json).collect::<Vec<_>>(),
            "route": match self.route { Route::Markov => "markov", Route::Iteration => "iteration" },
            "certified": self.certified,
        })
    }

    /// Index of the part whose interior contains the interior of `s`.
    pub fn part_containing(&self, s: &IntervalSet) -> Option<usize> {
        self.parts.iter().position(|p| p.contains_set(s))
    }
}

/// Interiors pairwise disjoint, union `[0,1]`, and `τ̂(K_i) = K_{i+1}`.
pub fn verify_structure(map: &PLMap, parts: &[IntervalSet]) -> bool {
    let n = parts.len();
    let union = parts.iter().fold(IntervalSet::empty(), |a, p| a.union(p));
    if !union.is_unit() {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if parts[i].interiors_meet(&parts[j]) {
                return false;
            }
        }
    }
    (0..n).all(|i| map.regular_image_set(&parts[i]) == parts[(i + 1) % n])
}

/// τ̂ᴺ-exactness on a part: every seed inside it reaches the whole part
/// under plain (non-cumulative) iteration.
fn exact_on_parts(map: &PLMap, parts: &[IntervalSet], limit: usize) -> bool {
    let n = parts.len();
    let seeds = seed_intervals(map, SEED_DEPTH);
    for part in parts {
        for seed in seeds.iter().filter(|s| part.contains_set(s)) {
            let mut cur = seed.clone();
            let mut reached = false;
            for _ in 0..limit {
                cur = image_power(map, &cur, n);
                if cur.len() > MAX_COMPONENTS {
                    return false;
                }
                if &cur == part {
                    reached = true;
                    break;
                }
            }
            if !reached {
                return false;
            }
        }
    }
    true
}

fn rotate_to_zero(mut parts: Vec<IntervalSet>) -> Vec<IntervalSet> {
    if let Some(k) = parts.iter().position(|p| p.contains_point(&Scalar::zero())) {
        parts.rotate_left(k);
    }
    parts
}

fn check_preconditions(map: &PLMap, bound: usize) -> Result<()> {
    if map.classify().essentially_injective {
        return Err(Error::unsupported(
            "essentially injective map: an exact decomposition need not exist",
        ));
    }
    if let Transitivity::NotTransitive { .. } = transitivity_check(map, bound) {
        return Err(Error::unsupported("map is not transitive"));
    }
    Ok(())
}

pub fn exact_decomposition(map: &PLMap, bound: usize) -> Result<ExactDecomposition> {
    check_preconditions(map, bound)?;
    let limit = bound.clamp(1, MAX_STEPS);
    if let MarkovOutcome::Markov(data) = detect_markov(map, bound) {
        let per = &data.periodicity;
        if !per.irreducible {
            return Err(Error::unsupported("incidence matrix is reducible; the map is not transitive"));
        }
        let n = per.period.expect("irreducible");
        let mut parts = vec![Vec::new(); n];
        for (i, &c) in per.classes.iter().enumerate() {
            let (a, b) = data.interval(i);
            parts[c].push((a.clone(), b.clone()));
        }
        let parts = rotate_to_zero(parts.into_iter().map(IntervalSet::from_pieces).collect());
        let certified = verify_structure(map, &parts) && exact_on_parts(map, &parts, limit);
        return Ok(ExactDecomposition { n, parts, route: Route::Markov, certified });
    }
    iteration_route(map, limit)
}

/// Candidate parts for period `n`: the τ̂ⁿ-cumulative closure of a seed and
/// its forward images.
fn candidate(map: &PLMap, seed: &IntervalSet, n: usize, limit: usize) -> Option<Vec<IntervalSet>> {
    let Chain::Stable { set, .. } = cumulative(seed, limit, |c| image_power(map, c, n)) else {
        return None;
    };
    let mut parts = vec![set];
    for i in 1..n {
        let next = map.regular_image_set(&parts[i - 1]);
        parts.push(next);
    }
    let parts = rotate_to_zero(parts);
    verify_structure(map, &parts).then_some(parts)
}

/// For each candidate period the largest one admitting valid parts wins:
/// divisors of the true period pass too (as unions), multiples and
/// unrelated periods fail the disjointness clause.
fn iteration_route(map: &PLMap, limit: usize) -> Result<ExactDecomposition> {
    let seeds = seed_intervals(map, SEED_DEPTH);
    for n in (1..=MAX_PERIOD).rev() {
        for seed in &seeds {
            if let Some(parts) = candidate(map, seed, n, limit) {
                let certified = exact_on_parts(map, &parts, limit);
                return Ok(ExactDecomposition { n, parts, route: Route::Iteration, certified });
            }
        }
    }
    Err(Error::unsupported(format!("no cyclic decomposition with period at most {MAX_PERIOD} within bound {limit}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    NotExact { n: usize },
    Undetermined,
}

impl Exactness {
    pub fn to_json(&self) -> Value {
        match self {
            Exactness::Exact => json!({"verdict": "exact"}),
            Exactness::NotExact { n } => json!({"verdict": "not_exact", "N": n}),
            Exactness::Undetermined => json!({"verdict": "undetermined"}),
        }
    }
}

pub fn exactness_check(map: &PLMap, bound: usize) -> Result<Exactness> {
    let d = exact_decomposition(map, bound)?;
    Ok(match (d.n, d.certified) {
        (1, true) => Exactness::Exact,
        (n, true) => Exactness::NotExact { n },
        _ => Exactness::Undetermined,
    })
}

/// Some iterate of every seed is all of `[0,1]`: a sufficient certificate
/// for exactness, hence mixing. `None` when not found within the bound.
pub fn covering_check(map: &PLMap, bound: usize) -> Option<bool> {
    let limit = bound.clamp(1, MAX_STEPS);
    let seeds = seed_intervals(map, SEED_DEPTH);
    for seed in &seeds {
        let mut cur = seed.clone();
        let mut hit = false;
        for _ in 0..limit {
            cur = map.regular_image_set(&cur);
            if cur.is_unit() {
                hit = true;
                break;
            }
            if cur.len() > MAX_COMPONENTS {
                return None;
            }
        }
        if !hit {
            return None;
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{rat, AlgebraicContext};
    use num_bigint::BigInt;

    fn sqrt2() -> Scalar {
        let m: Vec<BigInt> = [-2, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        Scalar::generator(&AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap())
    }

    #[test]
    fn tent_two_transitive_exact() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        assert!(matches!(transitivity_check(&t, 8), Transitivity::Transitive { .. }));
        let d = exact_decomposition(&t, 64).unwrap();
        assert_eq!(d.n, 1);
        assert!(d.parts[0].is_unit() && d.certified);
        assert_eq!(exactness_check(&t, 64).unwrap(), Exactness::Exact);
    }

    #[test]
    fn tent_six_fifths_invariant_witness() {
        let t = PLMap::tent(&Scalar::frac(6, 5)).unwrap();
        let Transitivity::NotTransitive { witness } = transitivity_check(&t, 256) else { panic!() };
        let t0 = t.branches()[0].eval(&Scalar::zero());
        assert_eq!(t0, Scalar::frac(4, 5));
        let t00 = t.branches()[1].eval(&t0);
        assert_eq!(
            witness,
            IntervalSet::from_pieces(vec![(Scalar::zero(), t00), (t0, Scalar::one())])
        );
        assert!(t.regular_image_set(&witness).union(&witness) == witness);
        assert!(exact_decomposition(&t, 64).is_err());
    }

    #[test]
    fn tent_sqrt2_two_parts() {
        let r = sqrt2();
        let t = PLMap::tent(&r).unwrap();
        let d = exact_decomposition(&t, 64).unwrap();
        assert_eq!(d.n, 2);
        assert_eq!(d.route, Route::Markov);
        let p = Scalar::int(2) - &r;
        assert_eq!(d.parts[0], IntervalSet::interval(Scalar::zero(), p.clone()));
        assert_eq!(d.parts[1], IntervalSet::interval(p, Scalar::one()));
        assert!(d.certified);
        assert_eq!(exactness_check(&t, 64).unwrap(), Exactness::NotExact { n: 2 });
    }

    #[test]
    fn iteration_route_agrees_with_markov() {
        let t = PLMap::tent(&sqrt2()).unwrap();
        let it = iteration_route(&t, 256).unwrap();
        let mk = exact_decomposition(&t, 64).unwrap();
        assert_eq!(it.n, 2);
        assert_eq!(it.parts, mk.parts);
    }

    #[test]
    fn non_markov_tent_is_exact() {
        let t = PLMap::tent(&Scalar::frac(3, 2)).unwrap();
        let d = exact_decomposition(&t, 64).unwrap();
        assert_eq!(d.route, Route::Iteration);
        assert_eq!(d.n, 1);
        assert_eq!(exactness_check(&t, 64).unwrap(), Exactness::Exact);
    }
}
