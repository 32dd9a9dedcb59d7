//! Markov partitions, incidence matrices and the cyclic structure of their digraphs.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::orbits::{critical_orbits, OrbitTable};
use crate::linalg::IntMatrix;
use crate::map_model::PLMap;
use crate::number::{scalar_to_json, Scalar};
use crate::transfer::MarkovHint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovData {
    /// Partition points `B`, ascending, including 0 and 1.
    pub points: Vec<Scalar>,
    /// Lap containing each interval `E_i = [b_{i-1}, b_i]`.
    pub lap_of: Vec<usize>,
    pub incidence: IntMatrix,
    pub periodicity: Periodicity,
    pub eventually_surjective: bool,
}

impl MarkovData {
    pub fn size(&self) -> usize {
        self.points.len() - 1
    }

    pub fn interval(&self, i: usize) -> (&Scalar, &Scalar) {
        (&self.points[i], &self.points[i + 1])
    }

    pub fn hint(&self) -> MarkovHint {
        MarkovHint { points: self.points.clone(), incidence: self.incidence.clone() }
    }

    pub fn incidence_json(&self) -> Value {
        json!(self.incidence.to_i64().expect("0/1 entries"))
    }

    pub fn partition_json(&self) -> Value {
        Value::Array(self.points.iter().map(scalar_to_json).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkovOutcome {
    Markov(MarkovData),
    NotMarkovWithinBound { bound: usize, orbits: OrbitTable },
}

/// Builds the Markov partition from closed critical orbits and verifies that
/// every partition interval maps onto a union of partition intervals.
pub fn detect_markov(map: &PLMap, bound: usize) -> MarkovOutcome {
    let table = critical_orbits(map, bound);
    if !table.all_closed() {
        return MarkovOutcome::NotMarkovWithinBound { bound, orbits: table };
    }
    let mut points: Vec<Scalar> = map.breakpoints().to_vec();
    for o in &table.orbits {
        points.extend(o.iterates.iter().cloned());
    }
    points.sort();
    points.dedup();
    let q = points.len() - 1;
    let mut lap_of = Vec::with_capacity(q);
    let mut incidence = IntMatrix::zeros(q, q);
    let bps = map.breakpoints();
    for i in 0..q {
        let mid_left = &points[i];
        let lap = bps.partition_point(|a| a <= mid_left) - 1;
        lap_of.push(lap);
        let br = &map.branches()[lap];
        let (u, v) = (br.eval(&points[i]), br.eval(&points[i + 1]));
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        let (Ok(jlo), Ok(jhi)) = (points.binary_search(&lo), points.binary_search(&hi)) else {
            // An image endpoint outside B defeats the Markov property.
            return MarkovOutcome::NotMarkovWithinBound { bound, orbits: table };
        };
        for j in jlo..jhi {
            incidence.set(i, j, BigInt::one());
        }
    }
    let periodicity = primitivity_period(&incidence);
    let eventually_surjective = eventually_covers(&incidence);
    MarkovOutcome::Markov(MarkovData { points, lap_of, incidence, periodicity, eventually_surjective })
}

/// True when iterating images from the full interval never loses a partition interval.
fn eventually_covers(a: &IntMatrix) -> bool {
    let q = a.nrows();
    let mut reach = vec![true; q];
    for _ in 0..=q {
        let mut next = vec![false; q];
        for i in 0..q {
            if reach[i] {
                for (j, n) in next.iter_mut().enumerate() {
                    if !a.get(i, j).is_zero() {
                        *n = true;
                    }
                }
            }
        }
        if next == reach {
            break;
        }
        reach = next;
    }
    reach.iter().all(|&r| r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodicity {
    pub irreducible: bool,
    pub primitive: bool,
    /// Period of an irreducible matrix.
    pub period: Option<usize>,
    /// Cyclic class of each vertex (irreducible case): edges go from class `r` to `r+1 mod N`.
    pub classes: Vec<usize>,
}

fn reachable(a: &IntMatrix, start: usize, transpose: bool) -> Vec<Option<usize>> {
    let q = a.nrows();
    let mut dist = vec![None; q];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for v in 0..q {
            let e = if transpose { a.get(v, u) } else { a.get(u, v) };
            if !e.is_zero() && dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Irreducibility and period via BFS levels: the period is the gcd of
/// `level(u) + 1 − level(v)` over all edges `u → v`.
pub fn primitivity_period(a: &IntMatrix) -> Periodicity {
    let q = a.nrows();
    let fwd = reachable(a, 0, false);
    let bwd = reachable(a, 0, true);
    let irreducible = q > 0 && fwd.iter().all(Option::is_some) && bwd.iter().all(Option::is_some);
    if !irreducible {
        return Periodicity { irreducible: false, primitive: false, period: None, classes: Vec::new() };
    }
    let lvl: Vec<i64> = fwd.iter().map(|d| d.unwrap() as i64).collect();
    let mut g: i64 = 0;
    for u in 0..q {
        for v in 0..q {
            if !a.get(u, v).is_zero() {
                g = g.gcd(&(lvl[u] + 1 - lvl[v]));
            }
        }
    }
    let period = g.unsigned_abs() as usize;
    let classes = lvl.iter().map(|&l| (l as usize) % period).collect();
    Periodicity { irreducible: true, primitive: period == 1, period: Some(period), classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::AlgebraicContext;

    fn m(r: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(r)
    }

    #[test]
    fn periods() {
        let p = primitivity_period(&m(&[vec![1, 1], vec![1, 1]]));
        assert!(p.primitive && p.period == Some(1));
        let p = primitivity_period(&m(&[vec![0, 1], vec![1, 0]]));
        assert!(!p.primitive && p.period == Some(2));
        let p = primitivity_period(&m(&[vec![1, 1], vec![1, 0]]));
        assert!(p.primitive);
        let p = primitivity_period(&m(&[vec![1, 1], vec![0, 1]]));
        assert!(!p.irreducible);
    }

    #[test]
    fn tent_and_golden_beta() {
        let MarkovOutcome::Markov(d) = detect_markov(&PLMap::tent(&Scalar::int(2)).unwrap(), 64) else { panic!() };
        assert_eq!(d.points, vec![Scalar::zero(), Scalar::frac(1, 2), Scalar::one()]);
        assert_eq!(d.incidence, m(&[vec![1, 1], vec![1, 1]]));
        let mp: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let ctx = AlgebraicContext::new(&mp, crate::number::rat::int(1), crate::number::rat::int(2)).unwrap();
        let phi = Scalar::generator(&ctx);
        let MarkovOutcome::Markov(d) = detect_markov(&PLMap::beta(&phi).unwrap(), 64) else { panic!() };
        assert_eq!(d.incidence, m(&[vec![1, 1], vec![1, 0]]));
        assert!(matches!(
            detect_markov(&PLMap::beta(&Scalar::frac(3, 2)).unwrap(), 64),
            MarkovOutcome::NotMarkovWithinBound { bound: 64, .. }
        ));
    }
}
