//! Increasing conjugacy of continuous transitive maps, decided by comparing
//! their uniformly piecewise linear models.

use serde_json::{json, Value};

use crate::decomposition::{transitivity_check, Transitivity};
use crate::map_model::PLMap;
use crate::markov::{scaling_measure, uniformize, ScalingMeasure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyVerdict {
    ConjugateIncreasing,
    NotConjugate { reason: String },
    Undetermined { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub verdict: ConjugacyVerdict,
    /// Result of the same comparison after flipping the second map by `x ↦ 1 − x`.
    pub conjugate_decreasing: Option<bool>,
    pub models: Option<(PLMap, PLMap)>,
}

impl ConjugacyReport {
    pub fn label(&self) -> &'static str {
        match self.verdict {
            ConjugacyVerdict::ConjugateIncreasing => "conjugate_increasing",
            ConjugacyVerdict::NotConjugate { .. } => "not_conjugate",
            ConjugacyVerdict::Undetermined { .. } => "undetermined",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match &self.verdict {
            ConjugacyVerdict::ConjugateIncreasing => None,
            ConjugacyVerdict::NotConjugate { reason } | ConjugacyVerdict::Undetermined { reason } => Some(reason),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.label(),
            "reason": self.reason(),
            "conjugate_decreasing": self.conjugate_decreasing,
            "uniform_models": self.models.as_ref().map(|(a, b)| json!([a.to_json(), b.to_json()])),
        })
    }
}

fn model(map: &PLMap, bound: usize) -> Result<(ScalingMeasure, PLMap), String> {
    if !map.classify().continuous {
        return Err("map is not continuous".into());
    }
    match transitivity_check(map, bound) {
        Transitivity::Transitive { .. } => {}
        Transitivity::NotTransitive { .. } => return Err("map is not transitive".into()),
        Transitivity::Undetermined { .. } => return Err("transitivity undetermined within the bound".into()),
    }
    let m = scaling_measure(map, bound).map_err(|e| e.to_string())?;
    let u = uniformize(map, &m.weights, &m.s).map_err(|e| e.to_string())?;
    Ok((m, u))
}

/// First certified difference between two uniform models, in priority order.
fn first_mismatch(a: &PLMap, b: &PLMap, sa: &ScalingMeasure, sb: &ScalingMeasure) -> Option<String> {
    if a.laps() != b.laps() {
        return Some("lap count".into());
    }
    if sa.s != sb.s {
        return Some(format!("scale factor ({} vs {})", sa.s.pretty(), sb.s.pretty()));
    }
    let (da, db) = (a.directions(), b.directions());
    if da[0] != db[0] {
        return Some("first-interval direction".into());
    }
    if da != db {
        return Some("fold directions".into());
    }
    if a.breakpoints() != b.breakpoints() {
        return Some("breakpoint measure coordinates".into());
    }
    if a.branches() != b.branches() {
        return Some("intercepts".into());
    }
    None
}

fn compare_models(map1: &PLMap, map2: &PLMap, bound: usize) -> Result<(Option<String>, PLMap, PLMap), String> {
    let (m1, u1) = model(map1, bound).map_err(|e| format!("first map: {e}"))?;
    let (m2, u2) = model(map2, bound).map_err(|e| format!("second map: {e}"))?;
    Ok((first_mismatch(&u1, &u2, &m1, &m2), u1, u2))
}

/// Two continuous transitive maps are conjugate by an increasing homeomorphism
/// iff their uniform models coincide.
pub fn conjugacy_compare(map1: &PLMap, map2: &PLMap, bound: usize) -> ConjugacyReport {
    let (verdict, models) = match compare_models(map1, map2, bound) {
        Ok((None, u1, u2)) => (ConjugacyVerdict::ConjugateIncreasing, Some((u1, u2))),
        Ok((Some(reason), u1, u2)) => (ConjugacyVerdict::NotConjugate { reason }, Some((u1, u2))),
        Err(reason) => (ConjugacyVerdict::Undetermined { reason }, None),
    };
    let conjugate_decreasing = match compare_models(map1, &map2.reflect(), bound) {
        Ok((m, _, _)) => Some(m.is_none()),
        Err(_) => None,
    };
    ConjugacyReport { verdict, conjugate_decreasing, models }
}
