//! JSON sections of the analysis report.

use num_bigint::BigInt;
use serde_json::{json, Value};

use pwmap::decomposition::{exact_decomposition, exactness_check, transitivity_check};
use pwmap::dimension::{
    beta_presentation, canonical_generators, infinitesimal_exists, presentation, state_range, DimensionTriple,
    LaurentOrder, OrderRule,
};
use pwmap::map_model::{MapSpec, PLMap};
use pwmap::markov::{
    detect_markov, entropy, perron_data, root_candidates, scaling_measure, EntropyMethod, MarkovOutcome,
};
use pwmap::number::{rat, scalar_to_json, Scalar};
use pwmap::pf_lab::{pf_eigenfunctions, pf_verify_cycle, PFOptions};
use pwmap::{Error, Result};

#[derive(Clone, Debug)]
pub struct Settings {
    pub bound: usize,
    pub tol: num_rational::BigRational,
    pub maxiter: usize,
    pub generic_s: bool,
    pub cylinders: usize,
}

/// `{"status": "unsupported" | "invalid", "reason": …}` for a failed section.
pub fn failure(e: &Error) -> Value {
    let status = match e {
        Error::Unsupported(_) => "unsupported",
        _ => "error",
    };
    json!({"status": status, "reason": e.to_string()})
}

fn section(r: Result<Value>) -> Value {
    r.unwrap_or_else(|e| failure(&e))
}

pub fn classification(map: &PLMap) -> Value {
    let c = map.classify();
    json!({
        "laps": map.laps(),
        "continuous": c.continuous,
        "surjective": c.surjective_hat,
        "essentially_injective": c.essentially_injective,
        "uniform_slope": map.uniform_slope().as_ref().map(scalar_to_json),
    })
}

pub fn markov(map: &PLMap, bound: usize) -> Value {
    match detect_markov(map, bound) {
        MarkovOutcome::Markov(data) => {
            let perron = if data.periodicity.irreducible {
                perron_data(&data.incidence, &root_candidates(map)).ok()
            } else {
                None
            };
            json!({
                "status": "markov",
                "partition": data.partition_json(),
                "incidence": data.incidence_json(),
                "charpoly": data.incidence.charpoly().iter().map(BigInt::to_string).collect::<Vec<_>>(),
                "s": perron.as_ref().map(|p| scalar_to_json(&p.s)),
                "measure": perron.as_ref().map(|p| p.right.iter().map(scalar_to_json).collect::<Vec<_>>()),
                "irreducible": data.periodicity.irreducible,
                "primitive": data.periodicity.primitive,
                "period": data.periodicity.period,
                "eventually_surjective": data.eventually_surjective,
            })
        }
        MarkovOutcome::NotMarkovWithinBound { bound, orbits } => json!({
            "status": "not_markov_within_bound",
            "bound": bound,
            "orbits": orbits.to_json(),
        }),
    }
}

pub fn entropy_methods(map: &PLMap, st: &Settings) -> Value {
    let mut out = Vec::new();
    if let MarkovOutcome::Markov(_) = detect_markov(map, st.bound) {
        out.push(section(entropy(map, &EntropyMethod::MarkovExact, st.bound).map(|e| e.to_json())));
    }
    let power = EntropyMethod::PowerIteration { tol: st.tol.clone(), maxiter: st.maxiter };
    out.push(section(entropy(map, &power, st.bound).map(|e| e.to_json())));
    let cyl = EntropyMethod::CylinderCount { n: st.cylinders };
    out.push(section(entropy(map, &cyl, st.bound).map(|e| e.to_json())));
    Value::Array(out)
}

/// Generators of the state range: Markov weights, else lap lengths.
fn state_generators(map: &PLMap, triple: &DimensionTriple, bound: usize) -> Result<(Scalar, Vec<Scalar>)> {
    match triple {
        DimensionTriple::MarkovLimit(m) => Ok((m.s.clone(), m.weights.clone())),
        DimensionTriple::LaurentCyclic(l) => {
            let w = (0..map.laps())
                .map(|i| {
                    let (a, b) = map.lap(i);
                    b - a
                })
                .collect();
            Ok((l.s.clone(), w))
        }
        DimensionTriple::DirectSum { .. } => {
            let full = pwmap::dimension::markov_presentation(map, bound)?;
            Ok((full.s, full.weights))
        }
    }
}

/// Whether the presentation has nonzero elements of state zero, with the reason.
fn infinitesimals(triple: &DimensionTriple, generic: bool) -> Value {
    match triple {
        DimensionTriple::MarkovLimit(m) => match m.order {
            OrderRule::Strict => json!({"exists": infinitesimal_exists(m), "criterion": "charpoly reducibility after removing t^k"}),
            _ => json!({"exists": Value::Null, "criterion": "not primitive"}),
        },
        DimensionTriple::LaurentCyclic(l) if l.order == LaurentOrder::Unordered => {
            json!({"exists": Value::Null, "criterion": format!("no order certified for s = {}", l.s.pretty())})
        }
        DimensionTriple::LaurentCyclic(l) if generic => {
            json!({"exists": false, "criterion": format!("s = {} declared transcendental", l.s.pretty())})
        }
        DimensionTriple::LaurentCyclic(l) => {
            let witness = match l.s.as_rational() {
                Some(r) => format!("{}·t − {}", r.denom(), r.numer()),
                None => l.s.context().map(|c| c.to_string()).unwrap_or_default(),
            };
            json!({"exists": true, "criterion": "s is algebraic", "witness": witness})
        }
        DimensionTriple::DirectSum { components, .. } => {
            let parts: Vec<Value> = components.iter().map(|c| infinitesimals(c, generic)).collect();
            let any = parts.iter().any(|p| p["exists"] == json!(true));
            let all_known = parts.iter().all(|p| p["exists"].is_boolean());
            json!({
                "exists": if any { json!(true) } else if all_known { json!(false) } else { Value::Null },
                "criterion": "componentwise",
                "components": parts,
            })
        }
    }
}

pub fn dimension(spec: &MapSpec, map: &PLMap, st: &Settings) -> Value {
    let mut out = serde_json::Map::new();
    out.insert(
        "generators".into(),
        section(canonical_generators(map).map(|(j1, j2)| {
            json!({
                "J1": j1.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
                "J2": j2.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            })
        })),
    );
    if let MapSpec::Beta { beta } = spec {
        out.insert("beta".into(), section(beta_presentation(beta, st.bound).map(|b| b.to_json())));
    }
    match presentation(map, st.bound) {
        Ok(triple) => {
            out.insert("presentation".into(), triple.to_json());
            out.insert("infinitesimals".into(), infinitesimals(&triple, st.generic_s));
            out.insert(
                "state_range".into(),
                section(state_generators(map, &triple, st.bound).map(|(s, w)| state_range(&s, &w, st.generic_s).to_json())),
            );
        }
        Err(e) => {
            out.insert("presentation".into(), failure(&e));
        }
    }
    Value::Object(out)
}

pub fn decomposition(map: &PLMap, bound: usize) -> Value {
    json!({
        "transitivity": transitivity_check(map, bound).to_json(),
        "exactness": section(exactness_check(map, bound).map(|e| e.to_json())),
        "decomposition": section(exact_decomposition(map, bound).map(|d| d.to_json())),
    })
}

pub fn pf(map: &PLMap, st: &Settings) -> Result<Value> {
    let opts = PFOptions { tol: st.tol.clone(), maxiter: st.maxiter, ..PFOptions::default() };
    let report = pf_eigenfunctions(map, st.bound, &opts)?;
    let verdict = pf_verify_cycle(&report, &st.tol)?;
    Ok(json!({"report": report.to_json(), "verify_cycle": verdict.to_json()}))
}

pub fn analyze(spec: &MapSpec, map: &PLMap, st: &Settings, with_pf: bool) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("map".into(), spec.to_json());
    out.insert("normalized".into(), map.to_json());
    out.insert("classification".into(), classification(map));
    out.insert("markov".into(), markov(map, st.bound));
    out.insert("entropy".into(), entropy_methods(map, st));
    out.insert("scaling_measure".into(), section(scaling_measure(map, st.bound).map(|m| m.to_json())));
    out.insert("decomposition".into(), decomposition(map, st.bound));
    out.insert("dimension".into(), dimension(spec, map, st));
    if with_pf {
        out.insert("pf".into(), section(pf(map, st)));
    }
    out.insert(
        "settings".into(),
        json!({"bound": st.bound, "tol": rat::render(&st.tol), "maxiter": st.maxiter, "generic_s": st.generic_s, "cylinder_depth": st.cylinders}),
    );
    Value::Object(out)
}
