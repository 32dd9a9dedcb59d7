//! Scaling measures and the conjugacy to a uniformly piecewise linear model.

use serde_json::{json, Value};

use super::incidence::{detect_markov, MarkovData, MarkovOutcome};
use super::perron::perron_data;
use crate::decomposition::{transitivity_check, Transitivity};
use crate::error::{Error, Result};
use crate::map_model::{Branch, PLMap};
use crate::number::{scalar_to_json, Scalar};
use crate::symbolic::MeasureWeights;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureSource {
    /// Lebesgue measure of a uniformly piecewise linear map.
    Lebesgue,
    /// Perron eigenvector masses on the Markov partition.
    Perron,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingMeasure {
    pub weights: MeasureWeights,
    pub s: Scalar,
    pub source: MeasureSource,
}

impl ScalingMeasure {
    pub fn to_json(&self) -> Value {
        json!({
            "source": match self.source { MeasureSource::Lebesgue => "lebesgue", MeasureSource::Perron => "perron" },
            "s": scalar_to_json(&self.s),
            "weights": self.weights.to_json(),
        })
    }
}

/// Candidate scalars for the Perron root: the map's slopes and the context generator.
pub fn root_candidates(map: &PLMap) -> Vec<Scalar> {
    let mut c: Vec<Scalar> = map.branches().iter().map(|b| b.slope.abs()).collect();
    if let Some(ctx) = map.branches().iter().find_map(|b| b.slope.context().cloned()) {
        c.push(Scalar::generator(&ctx));
    }
    for a in map.breakpoints() {
        if let Some(ctx) = a.context() {
            c.push(Scalar::generator(ctx));
        }
    }
    c
}

/// Scaling measure from a Markov partition with irreducible incidence matrix.
pub fn markov_measure(map: &PLMap, data: &MarkovData) -> Result<ScalingMeasure> {
    if !data.periodicity.irreducible {
        return Err(Error::unsupported("incidence matrix is reducible; the map is not transitive"));
    }
    let p = perron_data(&data.incidence, &root_candidates(map))?;
    let weights = MeasureWeights::new(data.points.clone(), p.right.clone())?;
    Ok(ScalingMeasure { weights, s: p.s, source: MeasureSource::Perron })
}

/// The unique scaling measure of a transitive map, when constructible.
pub fn scaling_measure(map: &PLMap, bound: usize) -> Result<ScalingMeasure> {
    if map.classify().essentially_injective {
        return Err(Error::unsupported(
            "essentially injective map: scaling measures are invariant measures and need not be unique",
        ));
    }
    let trans = transitivity_check(map, bound);
    if let Transitivity::NotTransitive { .. } = trans {
        return Err(Error::unsupported("map is not transitive; its scaling measure is not unique"));
    }
    if let Some(s) = map.uniform_slope() {
        return Ok(ScalingMeasure { weights: MeasureWeights::lebesgue(), s, source: MeasureSource::Lebesgue });
    }
    match detect_markov(map, bound) {
        MarkovOutcome::Markov(data) => markov_measure(map, &data),
        MarkovOutcome::NotMarkovWithinBound { .. } => Err(Error::unsupported(
            "map is neither Markov within the bound nor uniformly piecewise linear; supply the uniform model directly",
        )),
    }
}

/// `T = h∘τ∘h⁻¹` with `h(x) = μ([0,x])`; verifies that all slopes are `±s`.
pub fn uniformize(map: &PLMap, measure: &MeasureWeights, s: &Scalar) -> Result<PLMap> {
    let h = |x: &Scalar| measure.cdf(x);
    let bps: Vec<Scalar> = map.breakpoints().iter().map(h).collect();
    for (i, w) in bps.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::unsupported(format!("lap {i} has zero mass; the measure lacks full support")));
        }
    }
    let mut branches = Vec::with_capacity(map.laps());
    for i in 0..map.laps() {
        let (a, b) = map.lap(i);
        let br = &map.branches()[i];
        let (y0, y1) = (h(&br.eval(a)), h(&br.eval(b)));
        let slope = (&y1 - &y0) / (&bps[i + 1] - &bps[i]);
        if slope.abs() != *s {
            return Err(Error::unsupported(format!(
                "measure is not scaled by {} on lap {i} (ratio {})",
                s.pretty(),
                slope.pretty()
            )));
        }
        let intercept = &y0 - &slope * &bps[i];
        branches.push(Branch::new(slope, intercept));
    }
    PLMap::new(bps, branches)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::frac(p, d)
    }

    /// 2x on [0,1/2], 1 − x on [1/2,1]: Markov with A = [[1,1],[1,0]].
    fn markov_pl() -> PLMap {
        PLMap::new(
            vec![Scalar::zero(), q(1, 2), Scalar::one()],
            vec![Branch::new(Scalar::int(2), Scalar::zero()), Branch::new(Scalar::int(-1), Scalar::one())],
        )
        .unwrap()
    }

    #[test]
    fn uniform_maps_use_lebesgue() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let m = scaling_measure(&t, 64).unwrap();
        assert_eq!(m.source, MeasureSource::Lebesgue);
        assert_eq!(uniformize(&t, &m.weights, &m.s).unwrap(), t);
    }

    #[test]
    fn markov_pl_uniformizes_to_golden_slopes() {
        let f = markov_pl();
        let m = scaling_measure(&f, 64).unwrap();
        assert_eq!(m.source, MeasureSource::Perron);
        let phi = m.s.clone();
        assert_eq!(&phi * &phi, &phi + Scalar::one());
        assert_eq!(m.weights.masses(), &[&phi - Scalar::one(), Scalar::int(2) - &phi]);
        let u = uniformize(&f, &m.weights, &m.s).unwrap();
        assert_eq!(u.breakpoints()[1], &phi - Scalar::one());
        assert_eq!(u.uniform_slope(), Some(phi));
    }
}
