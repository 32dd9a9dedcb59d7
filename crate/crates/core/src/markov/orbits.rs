//! Forward orbits of endpoints and of the one-sided limits at breakpoints.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::map_model::{Location, PLMap};
use crate::number::{scalar_to_json, Scalar};

/// Where an orbit starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seed {
    /// The endpoint `0` or `1`.
    Endpoint(Scalar),
    /// Left limit `τ_k(a_k)` at interior breakpoint `a_k`.
    LeftLimit(usize),
    /// Right limit `τ_{k+1}(a_k)` at interior breakpoint `a_k`.
    RightLimit(usize),
}

impl Seed {
    pub fn label(&self) -> String {
        match self {
            Seed::Endpoint(x) => format!("endpoint {}", x.pretty()),
            Seed::LeftLimit(k) => format!("left limit at a_{k}"),
            Seed::RightLimit(k) => format!("right limit at a_{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// `x_{preperiod + period} = x_{preperiod}`.
    Periodic { preperiod: usize, period: usize },
    /// The last iterate is the interior breakpoint `a_k`; its continuations
    /// are the limit seeds at `a_k`.
    HitsBreakpoint { step: usize, breakpoint: usize },
    /// No repeat within the bound.
    Open { bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub seed: Seed,
    pub iterates: Vec<Scalar>,
    pub status: OrbitStatus,
}

impl Orbit {
    pub fn closed(&self) -> bool {
        !matches!(self.status, OrbitStatus::Open { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    pub orbits: Vec<Orbit>,
    pub bound: usize,
}

impl OrbitTable {
    pub fn all_closed(&self) -> bool {
        self.orbits.iter().all(Orbit::closed)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.orbits
                .iter()
                .map(|o| {
                    let status = match &o.status {
                        OrbitStatus::Periodic { preperiod, period } => {
                            json!({"kind": "periodic", "preperiod": preperiod, "period": period})
                        }
                        OrbitStatus::HitsBreakpoint { step, breakpoint } => {
                            json!({"kind": "hits_breakpoint", "step": step, "breakpoint": breakpoint})
                        }
                        OrbitStatus::Open { bound } => json!({"kind": "open", "bound": bound}),
                    };
                    let shown: Vec<Value> = o.iterates.iter().take(16).map(scalar_to_json).collect();
                    json!({"seed": o.seed.label(), "iterates": shown, "length": o.iterates.len(), "status": status})
                })
                .collect(),
        )
    }
}

/// Iterates a point until it repeats, lands on an interior breakpoint, or
/// `bound` steps pass. Endpoints continue through their single limit.
pub fn orbit_of(map: &PLMap, x0: Scalar, bound: usize) -> (Vec<Scalar>, OrbitStatus) {
    let mut seen: HashMap<Scalar, usize> = HashMap::new();
    let mut iterates = vec![x0];
    let n = map.laps();
    loop {
        let k = iterates.len() - 1;
        let x = iterates[k].clone();
        if let Some(&first) = seen.get(&x) {
            iterates.pop();
            return (iterates, OrbitStatus::Periodic { preperiod: first, period: k - first });
        }
        seen.insert(x.clone(), k);
        let next = match map.locate(&x).expect("orbit stays in [0,1]") {
            Location::Interior(i) => map.branches()[i].eval(&x),
            Location::Breakpoint(0) => map.branches()[0].eval(&x),
            Location::Breakpoint(j) if j == n => map.branches()[n - 1].eval(&x),
            Location::Breakpoint(j) => return (iterates, OrbitStatus::HitsBreakpoint { step: k, breakpoint: j }),
        };
        if k >= bound {
            return (iterates, OrbitStatus::Open { bound });
        }
        iterates.push(next);
    }
}

/// Orbits of `0`, `1` and both limits at every interior breakpoint.
pub fn critical_orbits(map: &PLMap, bound: usize) -> OrbitTable {
    let mut seeds = vec![Seed::Endpoint(Scalar::zero()), Seed::Endpoint(Scalar::one())];
    for k in 1..map.laps() {
        seeds.push(Seed::LeftLimit(k));
        seeds.push(Seed::RightLimit(k));
    }
    let orbits = seeds
        .into_iter()
        .map(|seed| {
            let x0 = match &seed {
                Seed::Endpoint(x) => x.clone(),
                Seed::LeftLimit(k) => map.limits_at(*k).0.unwrap(),
                Seed::RightLimit(k) => map.limits_at(*k).1.unwrap(),
            };
            let (iterates, status) = orbit_of(map, x0, bound);
            Orbit { seed, iterates, status }
        })
        .collect();
    OrbitTable { orbits, bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_two_orbits_close() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let tab = critical_orbits(&t, 16);
        assert!(tab.all_closed());
        // limit at the peak: 1 -> 0 -> 0
        let o = &tab.orbits[2];
        assert_eq!(o.iterates, vec![Scalar::one(), Scalar::zero()]);
        assert_eq!(o.status, OrbitStatus::Periodic { preperiod: 1, period: 1 });
    }

    #[test]
    fn beta_three_halves_is_open() {
        let b = PLMap::beta(&Scalar::frac(3, 2)).unwrap();
        let (it, st) = orbit_of(&b, Scalar::one(), 64);
        assert_eq!(st, OrbitStatus::Open { bound: 64 });
        assert_eq!(&it[..4], &[Scalar::one(), Scalar::frac(1, 2), Scalar::frac(3, 4), Scalar::frac(1, 8)]);
    }
}
