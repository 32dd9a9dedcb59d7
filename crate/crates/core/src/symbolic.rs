//! The disconnection X of `[0,1]`: side-tagged points, order intervals, the
//! lift σ of τ, step functions in C(X) and interval-length measures.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::map_model::{Direction, IntervalSet, Location, PLMap};
use crate::number::{parse_scalar, scalar_to_json, Scalar, Session};

/// Side tag; `Minus < Plain < Plus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Minus,
    Plain,
    Plus,
}

impl Side {
    pub fn symbol(self) -> &'static str {
        match self {
            Side::Minus => "-",
            Side::Plain => "",
            Side::Plus => "+",
        }
    }

    fn flip(self) -> Self {
        match self {
            Side::Minus => Side::Plus,
            Side::Plain => Side::Plain,
            Side::Plus => Side::Minus,
        }
    }
}

/// A point of X. `0` carries only the plus copy and `1` only the minus copy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XPoint {
    pub value: Scalar,
    pub side: Side,
}

impl XPoint {
    pub fn new(value: Scalar, side: Side) -> Self {
        let side = if value.is_zero() {
            Side::Plus
        } else if value.is_one() {
            Side::Minus
        } else {
            side
        };
        XPoint { value, side }
    }

    pub fn plain(value: Scalar) -> Self {
        Self::new(value, Side::Plain)
    }

    pub fn plus(value: Scalar) -> Self {
        Self::new(value, Side::Plus)
    }

    pub fn minus(value: Scalar) -> Self {
        Self::new(value, Side::Minus)
    }

    pub fn to_json(&self) -> Value {
        json!({"value": scalar_to_json(&self.value), "side": self.side.symbol()})
    }
}

impl PartialOrd for XPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value).then(self.side.cmp(&other.side))
    }
}

/// Order interval `[left, right]` of X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderInterval {
    pub left: XPoint,
    pub right: XPoint,
}

impl OrderInterval {
    /// The clopen interval `I(a, b) = [a⁺, b⁻]`; empty when `a >= b`.
    pub fn clopen(a: Scalar, b: Scalar) -> Option<Self> {
        (a < b).then(|| OrderInterval { left: XPoint::plus(a), right: XPoint::minus(b) })
    }

    pub fn contains(&self, x: &XPoint) -> bool {
        &self.left <= x && x <= &self.right
    }
}

/// The lift σ: at a partition point the side tag selects the branch, and
/// decreasing branches swap the tag.
pub fn sigma_apply(map: &PLMap, x: &XPoint) -> Result<XPoint> {
    let i = match map.locate(&x.value)? {
        Location::Interior(i) => i,
        Location::Breakpoint(0) => 0,
        Location::Breakpoint(k) if k == map.laps() => k - 1,
        Location::Breakpoint(k) => match x.side {
            Side::Minus => k - 1,
            Side::Plus => k,
            Side::Plain => {
                return Err(Error::invalid(
                    "x",
                    format!("plain point {} sits on a partition point; split it first", x.value.pretty()),
                ))
            }
        },
    };
    let br = &map.branches()[i];
    let side = if br.direction() == Direction::Increasing { x.side } else { x.side.flip() };
    Ok(XPoint::new(br.eval(&x.value), side))
}

/// Membership of a point in the generalized breakpoint orbit I₁.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `τ̂^j(x)` meets `τ̂^k(a)` for a partition point `a`.
    Certified { forward_steps: usize, breakpoint_steps: usize },
    Unknown,
}

/// Searches for a meeting of the forward τ̂-orbits of `x` and of the
/// partition points within `depth` steps each.
pub fn i1_membership(map: &PLMap, x: &Scalar, depth: usize) -> Result<Membership> {
    let mut bp_levels: Vec<HashSet<Scalar>> = vec![map.breakpoints().iter().cloned().collect()];
    for _ in 0..depth {
        let mut next = HashSet::new();
        for y in bp_levels.last().unwrap() {
            next.extend(map.hat_image_point(y)?);
        }
        bp_levels.push(next);
    }
    let mut cur: HashSet<Scalar> = [x.clone()].into_iter().collect();
    for j in 0..=depth {
        for (k, lvl) in bp_levels.iter().enumerate() {
            if cur.iter().any(|y| lvl.contains(y)) {
                return Ok(Membership::Certified { forward_steps: j, breakpoint_steps: k });
            }
        }
        let mut next = HashSet::new();
        for y in &cur {
            next.extend(map.hat_image_point(y)?);
        }
        cur = next;
    }
    Ok(Membership::Unknown)
}

/// Probability measure with piecewise-constant density on a finite partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureWeights {
    points: Vec<Scalar>,
    masses: Vec<Scalar>,
}

impl MeasureWeights {
    pub fn lebesgue() -> Self {
        MeasureWeights { points: vec![Scalar::zero(), Scalar::one()], masses: vec![Scalar::one()] }
    }

    pub fn new(points: Vec<Scalar>, masses: Vec<Scalar>) -> Result<Self> {
        if points.len() != masses.len() + 1 || points.len() < 2 {
            return Err(Error::invalid("measure", "need one mass per partition interval"));
        }
        if !points[0].is_zero() || !points.last().unwrap().is_one() {
            return Err(Error::invalid("measure.points", "must run from 0 to 1"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("measure.points", "must be strictly ascending"));
        }
        if masses.iter().any(|m| m.sign() < 0) {
            return Err(Error::invalid("measure.masses", "masses must be nonnegative"));
        }
        let total: Scalar = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid("measure.masses", format!("masses sum to {}, not 1", total.pretty())));
        }
        Ok(MeasureWeights { points, masses })
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }

    pub fn masses(&self) -> &[Scalar] {
        &self.masses
    }

    pub fn full_support(&self) -> bool {
        self.masses.iter().all(|m| m.sign() > 0)
    }

    /// `μ([0, x])`.
    pub fn cdf(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (j, m) in self.masses.iter().enumerate() {
            let (a, b) = (&self.points[j], &self.points[j + 1]);
            if x >= b {
                acc = acc + m;
            } else {
                if x > a {
                    acc = acc + m * (x - a) / (b - a);
                }
                break;
            }
        }
        acc
    }

    pub fn interval(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.cdf(b) - self.cdf(a)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "masses": self.masses.iter().map(scalar_to_json).collect::<Vec<_>>(),
        })
    }
}

/// A step function on X: value `values[j]` on `I(c_j, c_{j+1})` where
/// `c_0 = 0`, the interior cuts are stored, and the last cut is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFunction {
    cuts: Vec<Scalar>,
    values: Vec<Scalar>,
}

impl StepFunction {
    /// Builds from interior cuts (strictly inside (0,1), ascending) and values.
    pub fn new(cuts: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != cuts.len() + 1 {
            return Err(Error::invalid("values", "need one more value than interior cuts"));
        }
        let (zero, one) = (Scalar::zero(), Scalar::one());
        if cuts.iter().any(|c| *c <= zero || *c >= one) {
            return Err(Error::invalid("cuts", "interior cuts must lie strictly inside (0,1)"));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("cuts", "cuts must be strictly ascending"));
        }
        Ok(Self::from_parts(cuts, values))
    }

    fn from_parts(cuts: Vec<Scalar>, values: Vec<Scalar>) -> Self {
        StepFunction { cuts, values }.normalize()
    }

    pub fn constant(c: Scalar) -> Self {
        StepFunction { cuts: Vec::new(), values: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(Scalar::zero())
    }

    /// `c·χ_{I(a,b)}`.
    pub fn indicator_scaled(a: &Scalar, b: &Scalar, c: Scalar) -> Self {
        let (zero, one) = (Scalar::zero(), Scalar::one());
        if a >= b || c.is_zero() {
            return Self::zero();
        }
        let mut cuts = Vec::new();
        let mut values = Vec::new();
        if *a > zero {
            cuts.push(a.clone());
            values.push(Scalar::zero());
        }
        values.push(c);
        if *b < one {
            cuts.push(b.clone());
            values.push(Scalar::zero());
        }
        StepFunction { cuts, values }
    }

    /// `χ_{I(a,b)}`.
    pub fn indicator(a: &Scalar, b: &Scalar) -> Self {
        Self::indicator_scaled(a, b, Scalar::one())
    }

    /// Sum of indicators of the pieces of a set.
    pub fn indicator_of_set(s: &IntervalSet) -> Self {
        s.regular().pieces().iter().fold(Self::zero(), |acc, (a, b)| acc.add(&Self::indicator(a, b)))
    }

    pub fn cuts(&self) -> &[Scalar] {
        &self.cuts
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Pieces as `(left, right, value)` with `left < right`.
    pub fn pieces(&self) -> impl Iterator<Item = (Scalar, Scalar, &Scalar)> + '_ {
        let k = self.values.len();
        (0..k).map(move |j| {
            let a = if j == 0 { Scalar::zero() } else { self.cuts[j - 1].clone() };
            let b = if j + 1 == k { Scalar::one() } else { self.cuts[j].clone() };
            (a, b, &self.values[j])
        })
    }

    /// Merges adjacent pieces with equal values.
    pub fn normalize(self) -> Self {
        let mut cuts = Vec::with_capacity(self.cuts.len());
        let mut values: Vec<Scalar> = Vec::with_capacity(self.values.len());
        for (j, v) in self.values.into_iter().enumerate() {
            if let Some(last) = values.last() {
                if *last == v {
                    continue;
                }
                cuts.push(self.cuts[j - 1].clone());
            }
            values.push(v);
        }
        StepFunction { cuts, values }
    }

    /// Pointwise combination over the common refinement.
    pub fn zip_with(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        let mut cuts = Vec::with_capacity(self.cuts.len() + other.cuts.len());
        let mut values = Vec::with_capacity(self.values.len() + other.values.len());
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            values.push(f(&self.values[i], &other.values[j]));
            let next = match (self.cuts.get(i), other.cuts.get(j)) {
                (None, None) => break,
                (Some(a), None) => {
                    i += 1;
                    a.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.clone()
                }
                (Some(a), Some(b)) => match a.cmp(b) {
                    Ordering::Less => {
                        i += 1;
                        a.clone()
                    }
                    Ordering::Greater => {
                        j += 1;
                        b.clone()
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        a.clone()
                    }
                },
            };
            cuts.push(next);
        }
        StepFunction { cuts, values }.normalize()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        StepFunction { cuts: self.cuts.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    /// Sums many step functions with one sweep over all cuts.
    pub fn sum_all(parts: &[StepFunction]) -> Self {
        match parts.len() {
            0 => Self::zero(),
            1 => parts[0].clone(),
            _ => {
                let mid = parts.len() / 2;
                Self::sum_all(&parts[..mid]).add(&Self::sum_all(&parts[mid..]))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.len() == 1 && self.values[0].is_zero()
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.as_integer().is_some())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v.sign() >= 0)
    }

    /// Value at a point of X; plain points on a cut are ambiguous.
    pub fn eval(&self, x: &XPoint) -> Result<Scalar> {
        let idx = self.cuts.partition_point(|c| *c < x.value);
        if idx < self.cuts.len() && self.cuts[idx] == x.value {
            return match x.side {
                Side::Minus => Ok(self.values[idx].clone()),
                Side::Plus => Ok(self.values[idx + 1].clone()),
                Side::Plain => {
                    Err(Error::invalid("x", format!("plain point {} sits on a cut; split it first", x.value.pretty())))
                }
            };
        }
        Ok(self.values[idx].clone())
    }

    /// Value on the open gap immediately right of `x` (or left of `1`).
    pub fn value_right_of(&self, x: &Scalar) -> &Scalar {
        let idx = self.cuts.partition_point(|c| c <= x);
        &self.values[idx.min(self.values.len() - 1)]
    }

    pub fn integrate(&self, mu: &MeasureWeights) -> Scalar {
        self.pieces().filter(|(_, _, v)| !v.is_zero()).map(|(a, b, v)| v * mu.interval(&a, &b)).sum()
    }

    pub fn supnorm(&self) -> Scalar {
        self.values.iter().map(Scalar::abs).fold(Scalar::zero(), Scalar::max)
    }

    /// Total variation (sum of jump magnitudes).
    pub fn var(&self) -> Scalar {
        self.values.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum()
    }

    pub fn abs(&self) -> Self {
        StepFunction { cuts: self.cuts.clone(), values: self.values.iter().map(Scalar::abs).collect() }.normalize()
    }

    /// Closure of the set where `f ≠ 0`.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::from_pieces(self.pieces().filter(|(_, _, v)| !v.is_zero()).map(|(a, b, _)| (a, b)).collect())
    }

    /// Minimum of the values on the support (`None` for the zero function).
    pub fn min_on_support(&self) -> Option<Scalar> {
        self.values.iter().filter(|v| !v.is_zero()).cloned().reduce(Scalar::min)
    }

    /// `f·χ_S` for a finite union of closed intervals.
    pub fn restrict(&self, s: &IntervalSet) -> Self {
        self.mul(&Self::indicator_of_set(s))
    }

    pub fn to_json(&self) -> Value {
        let mut cuts = vec![XPoint::plus(Scalar::zero()).to_json()];
        cuts.extend(self.cuts.iter().map(|c| XPoint::plus(c.clone()).to_json()));
        cuts.push(XPoint::minus(Scalar::one()).to_json());
        json!({"cuts": cuts, "values": self.values.iter().map(scalar_to_json).collect::<Vec<_>>()})
    }

    /// Accepts cut lists either with the `0` and `1` ends or with interior cuts only.
    pub fn from_json(v: &Value, session: &mut Session) -> Result<Self> {
        let arr = |key: &str| -> Result<&Vec<Value>> {
            v.get(key)
                .ok_or_else(|| Error::invalid(key, "missing"))?
                .as_array()
                .ok_or_else(|| Error::invalid(key, "expected an array"))
        };
        let values = arr("values")?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_scalar(x, session, &format!("values[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut cuts = Vec::new();
        for (i, c) in arr("cuts")?.iter().enumerate() {
            let f = format!("cuts[{i}]");
            let val = if c.is_object() && c.get("value").is_some() && c.get("minpoly").is_none() {
                c.get("value").unwrap()
            } else {
                c
            };
            cuts.push(parse_scalar(val, session, &f)?);
        }
        if cuts.len() == values.len() + 1 {
            if !cuts[0].is_zero() || !cuts.last().unwrap().is_one() {
                return Err(Error::invalid("cuts", "full cut list must start at 0 and end at 1"));
            }
            cuts.pop();
            cuts.remove(0);
        }
        Self::new(cuts, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::frac(p, d)
    }

    #[test]
    fn normalize_merges() {
        let f = StepFunction::new(vec![q(1, 2)], vec![Scalar::one(), Scalar::one()]).unwrap();
        assert_eq!(f, StepFunction::constant(Scalar::one()));
        let g = StepFunction::new(vec![q(1, 2)], vec![Scalar::int(2), Scalar::int(3)]).unwrap();
        assert_eq!(g.cuts().len(), 1);
        assert_eq!(g.clone().normalize(), g);
    }

    #[test]
    fn integrals_and_variation() {
        let mu = MeasureWeights::lebesgue();
        assert_eq!(StepFunction::constant(Scalar::one()).integrate(&mu), Scalar::one());
        assert_eq!(StepFunction::indicator(&Scalar::zero(), &q(1, 3)).integrate(&mu), q(1, 3));
        let f = StepFunction::new(vec![q(1, 3), q(2, 3)], vec![Scalar::one(), Scalar::int(-2), Scalar::one()]).unwrap();
        assert_eq!(f.var(), Scalar::int(6));
        assert_eq!(f.supnorm(), Scalar::int(2));
    }

    #[test]
    fn sigma_on_partition_points() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        let h = q(1, 2);
        assert_eq!(sigma_apply(&t, &XPoint::minus(h.clone())).unwrap(), XPoint::minus(Scalar::one()));
        assert_eq!(sigma_apply(&t, &XPoint::plus(h.clone())).unwrap(), XPoint::minus(Scalar::one()));
        assert!(sigma_apply(&t, &XPoint::plain(h)).is_err());
        assert_eq!(sigma_apply(&t, &XPoint::plus(q(1, 4))).unwrap(), XPoint::plus(q(1, 2)));
        assert_eq!(sigma_apply(&t, &XPoint::plus(q(3, 4))).unwrap(), XPoint::minus(q(1, 2)));
    }

    #[test]
    fn eval_by_side() {
        let f = StepFunction::indicator(&Scalar::zero(), &q(1, 2));
        assert_eq!(f.eval(&XPoint::minus(q(1, 2))).unwrap(), Scalar::one());
        assert_eq!(f.eval(&XPoint::plus(q(1, 2))).unwrap(), Scalar::zero());
        assert!(f.eval(&XPoint::plain(q(1, 2))).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = StepFunction::new(vec![q(1, 3)], vec![Scalar::int(1), Scalar::int(0)]).unwrap();
        let mut s = Session::new();
        assert_eq!(StepFunction::from_json(&f.to_json(), &mut s).unwrap(), f);
        let short = json!({"cuts": ["1/3"], "values": ["1", "0"]});
        assert_eq!(StepFunction::from_json(&short, &mut s).unwrap(), f);
    }

    #[test]
    fn membership_of_constructed_points() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        // 1/4 maps to 1/2, a partition point
        assert!(matches!(i1_membership(&t, &q(1, 4), 4).unwrap(), Membership::Certified { .. }));
        let t32 = PLMap::tent(&q(3, 2)).unwrap();
        assert_eq!(i1_membership(&t32, &q(1, 7), 6).unwrap(), Membership::Unknown);
    }

    #[test]
    fn non_uniform_measure() {
        let mu = MeasureWeights::new(vec![Scalar::zero(), q(1, 2), Scalar::one()], vec![q(1, 4), q(3, 4)]).unwrap();
        assert_eq!(mu.cdf(&q(1, 4)), q(1, 8));
        assert_eq!(mu.interval(&q(1, 4), &q(3, 4)), q(1, 8) + q(3, 8));
    }
}
