//! Piecewise-linear maps of `[0, 1]` and their multivalued extension τ̂.
//!
//! Values of τ at partition points are never stored. At a breakpoint `a_i`
//! the map is represented by the left and right branch limits.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::number::{parse_scalar, scalar_to_json, Scalar, Session};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Increasing => "+",
            Direction::Decreasing => "-",
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Direction::Increasing => 1,
            Direction::Decreasing => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        }
    }
}

/// Affine branch `x ↦ slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub slope: Scalar,
    pub intercept: Scalar,
}

impl Branch {
    pub fn new(slope: Scalar, intercept: Scalar) -> Self {
        Branch { slope, intercept }
    }

    pub fn direction(&self) -> Direction {
        if self.slope.sign() > 0 {
            Direction::Increasing
        } else {
            Direction::Decreasing
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        &self.slope * x + &self.intercept
    }

    pub fn inverse(&self, y: &Scalar) -> Scalar {
        (y - &self.intercept) / &self.slope
    }
}

/// Finite union of closed intervals, sorted, with touching pieces merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet {
    pieces: Vec<(Scalar, Scalar)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { pieces: Vec::new() }
    }

    pub fn unit() -> Self {
        Self::interval(Scalar::zero(), Scalar::one())
    }

    pub fn interval(lo: Scalar, hi: Scalar) -> Self {
        Self::from_pieces(vec![(lo, hi)])
    }

    /// Normalizes arbitrary (possibly overlapping) closed intervals.
    pub fn from_pieces(mut pieces: Vec<(Scalar, Scalar)>) -> Self {
        pieces.retain(|(a, b)| a <= b);
        pieces.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        let mut out: Vec<(Scalar, Scalar)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            if let Some(last) = out.last_mut() {
                if a <= last.1 {
                    if b > last.1 {
                        last.1 = b;
                    }
                    continue;
                }
            }
            out.push((a, b));
        }
        IntervalSet { pieces: out }
    }

    pub fn pieces(&self) -> &[(Scalar, Scalar)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    /// Drops degenerate (single-point) pieces.
    pub fn regular(&self) -> Self {
        IntervalSet { pieces: self.pieces.iter().filter(|(a, b)| a < b).cloned().collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.pieces.clone();
        v.extend(other.pieces.iter().cloned());
        Self::from_pieces(v)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for (a, b) in &self.pieces {
            for (c, d) in &other.pieces {
                let lo = a.clone().max(c.clone());
                let hi = b.clone().min(d.clone());
                if lo <= hi {
                    out.push((lo, hi));
                }
            }
        }
        Self::from_pieces(out)
    }

    /// Closure of `[0,1]` minus this set.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cur = Scalar::zero();
        for (a, b) in &self.pieces {
            if &cur < a {
                out.push((cur.clone(), a.clone()));
            }
            cur = b.clone();
        }
        if cur < Scalar::one() {
            out.push((cur, Scalar::one()));
        }
        Self::from_pieces(out)
    }

    pub fn contains_point(&self, x: &Scalar) -> bool {
        self.pieces.iter().any(|(a, b)| a <= x && x <= b)
    }

    /// True when `other` is contained in this set.
    pub fn contains_set(&self, other: &Self) -> bool {
        other.pieces.iter().all(|(c, d)| self.pieces.iter().any(|(a, b)| a <= c && d <= b))
    }

    pub fn is_unit(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].0.is_zero() && self.pieces[0].1.is_one()
    }

    pub fn measure(&self) -> Scalar {
        self.pieces.iter().map(|(a, b)| b - a).sum()
    }

    /// True when the interiors of the two sets meet.
    pub fn interiors_meet(&self, other: &Self) -> bool {
        self.intersect(other).pieces.iter().any(|(a, b)| a < b)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.pieces.iter().map(|(a, b)| json!([scalar_to_json(a), scalar_to_json(b)])).collect())
    }
}

/// Where a point of `[0,1]` sits relative to the partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    /// Inside the open lap with this branch index.
    Interior(usize),
    /// Equal to breakpoint `a_k`.
    Breakpoint(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub continuous: bool,
    pub surjective_hat: bool,
    pub essentially_injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    breakpoints: Vec<Scalar>,
    branches: Vec<Branch>,
}

impl PLMap {
    /// Validates and builds a map from breakpoints `0 = a_0 < … < a_n = 1` and `n` branches.
    pub fn new(breakpoints: Vec<Scalar>, branches: Vec<Branch>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid("breakpoints", "need at least 0 and 1"));
        }
        if !breakpoints[0].is_zero() || !breakpoints.last().unwrap().is_one() {
            return Err(Error::invalid("breakpoints", "must start at 0 and end at 1"));
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::invalid(format!("breakpoints[{}]", i + 1), "breakpoints must be strictly ascending"));
            }
        }
        if branches.len() + 1 != breakpoints.len() {
            return Err(Error::invalid("branches", "need exactly one branch per lap"));
        }
        let zero = Scalar::zero();
        let one = Scalar::one();
        for (i, br) in branches.iter().enumerate() {
            if br.slope.is_zero() {
                return Err(Error::invalid(format!("branches[{i}].slope"), "slope must be nonzero"));
            }
            for x in [&breakpoints[i], &breakpoints[i + 1]] {
                let y = br.eval(x);
                if y < zero || y > one {
                    return Err(Error::invalid(
                        format!("branches[{i}]"),
                        format!("image of {} is {}, outside [0,1]", x.pretty(), y.pretty()),
                    ));
                }
            }
        }
        for i in 1..branches.len() {
            let a = &breakpoints[i];
            if branches[i - 1].direction() == branches[i].direction() && branches[i - 1].eval(a) == branches[i].eval(a) {
                return Err(Error::invalid(
                    format!("branches[{i}]"),
                    format!("laps {} and {} form one monotone continuous piece; merge them", i - 1, i),
                ));
            }
        }
        Ok(PLMap { breakpoints, branches })
    }

    pub fn tent(s: &Scalar) -> Result<Self> {
        if *s <= Scalar::one() || *s > Scalar::int(2) {
            return Err(Error::invalid("s", "tent parameter must satisfy 1 < s <= 2"));
        }
        let c = Scalar::one() - Scalar::one() / s;
        Self::new(
            vec![Scalar::zero(), c, Scalar::one()],
            vec![Branch::new(s.clone(), Scalar::int(2) - s), Branch::new(-s, s.clone())],
        )
    }

    pub fn beta(beta: &Scalar) -> Result<Self> {
        if *beta <= Scalar::one() {
            return Err(Error::invalid("beta", "beta must exceed 1"));
        }
        let n = beta.floor();
        let n: i64 = n.try_into().map_err(|_| Error::invalid("beta", "beta too large"))?;
        let mut bps = vec![Scalar::zero()];
        let mut branches = Vec::new();
        for k in 1..=n {
            let a = Scalar::int(k) / beta;
            if a.is_one() {
                break;
            }
            bps.push(a);
        }
        bps.push(Scalar::one());
        for k in 0..bps.len() - 1 {
            branches.push(Branch::new(beta.clone(), Scalar::int(-(k as i64))));
        }
        Self::new(bps, branches)
    }

    /// Continuous map with slopes `±s` in the given fold pattern, pinned by
    /// requiring branch `anchor_branch` to pass through `(x, y)`.
    pub fn uniform_pl(
        s: &Scalar,
        breakpoints: Vec<Scalar>,
        directions: &[Direction],
        anchor: (&Scalar, &Scalar, usize),
    ) -> Result<Self> {
        if s.sign() <= 0 {
            return Err(Error::invalid("s", "slope factor must be positive"));
        }
        let n = directions.len();
        if breakpoints.len() != n + 1 {
            return Err(Error::invalid("directions", "need one direction per lap"));
        }
        let (ax, ay, j) = anchor;
        if j >= n {
            return Err(Error::invalid("anchor.branch", "branch index out of range"));
        }
        let slopes: Vec<Scalar> =
            directions.iter().map(|d| if *d == Direction::Increasing { s.clone() } else { -s }).collect();
        let mut intercepts = vec![Scalar::zero(); n];
        intercepts[j] = ay - &slopes[j] * ax;
        for k in j + 1..n {
            let a = &breakpoints[k];
            let v = &slopes[k - 1] * a + &intercepts[k - 1];
            intercepts[k] = v - &slopes[k] * a;
        }
        for k in (0..j).rev() {
            let a = &breakpoints[k + 1];
            let v = &slopes[k + 1] * a + &intercepts[k + 1];
            intercepts[k] = v - &slopes[k] * a;
        }
        let branches = slopes.into_iter().zip(intercepts).map(|(a, b)| Branch::new(a, b)).collect();
        Self::new(breakpoints, branches)
    }

    pub fn identity() -> Self {
        PLMap { breakpoints: vec![Scalar::zero(), Scalar::one()], branches: vec![Branch::new(Scalar::one(), Scalar::zero())] }
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Number of laps `n`.
    pub fn laps(&self) -> usize {
        self.branches.len()
    }

    pub fn lap(&self, i: usize) -> (&Scalar, &Scalar) {
        (&self.breakpoints[i], &self.breakpoints[i + 1])
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.branches.iter().map(Branch::direction).collect()
    }

    /// Common `|slope|` when the map is uniformly piecewise linear.
    pub fn uniform_slope(&self) -> Option<Scalar> {
        let s = self.branches[0].slope.abs();
        self.branches.iter().all(|b| b.slope.abs() == s).then_some(s)
    }

    /// Image `[lo, hi]` of lap `i`.
    pub fn branch_image(&self, i: usize) -> (Scalar, Scalar) {
        let (a, b) = self.lap(i);
        let (u, v) = (self.branches[i].eval(a), self.branches[i].eval(b));
        if u <= v {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// Left and right limits at breakpoint `a_k`; missing at 0 (left) and 1 (right).
    pub fn limits_at(&self, k: usize) -> (Option<Scalar>, Option<Scalar>) {
        let a = &self.breakpoints[k];
        let left = (k > 0).then(|| self.branches[k - 1].eval(a));
        let right = (k < self.laps()).then(|| self.branches[k].eval(a));
        (left, right)
    }

    pub fn locate(&self, x: &Scalar) -> Result<Location> {
        if *x < Scalar::zero() || *x > Scalar::one() {
            return Err(Error::invalid("x", format!("{} lies outside [0,1]", x.pretty())));
        }
        let bp = &self.breakpoints;
        let (mut lo, mut hi) = (0usize, bp.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if *x < bp[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if *x == bp[lo] {
            Ok(Location::Breakpoint(lo))
        } else if *x == bp[hi] {
            Ok(Location::Breakpoint(hi))
        } else {
            Ok(Location::Interior(lo))
        }
    }

    /// τ̂(x): one value inside a lap, the set of one-sided limits at a breakpoint.
    pub fn hat_image_point(&self, x: &Scalar) -> Result<Vec<Scalar>> {
        Ok(match self.locate(x)? {
            Location::Interior(i) => vec![self.branches[i].eval(x)],
            Location::Breakpoint(k) => {
                let (l, r) = self.limits_at(k);
                let mut v: Vec<Scalar> = l.into_iter().chain(r).collect();
                v.sort();
                v.dedup();
                v
            }
        })
    }

    /// Exact τ̂(S), including images of isolated contact points with laps.
    pub fn hat_image_set(&self, s: &IntervalSet) -> IntervalSet {
        self.image_impl(s, true)
    }

    /// Image of the interior: laps meeting `S` in a single point are ignored
    /// and degenerate pieces are dropped.
    pub fn regular_image_set(&self, s: &IntervalSet) -> IntervalSet {
        self.image_impl(&s.regular(), false).regular()
    }

    fn image_impl(&self, s: &IntervalSet, keep_points: bool) -> IntervalSet {
        let mut out = Vec::new();
        for (c, d) in s.pieces() {
            for i in 0..self.laps() {
                let (a, b) = self.lap(i);
                let lo = c.clone().max(a.clone());
                let hi = d.clone().min(b.clone());
                if lo > hi || (!keep_points && lo == hi) {
                    continue;
                }
                let br = &self.branches[i];
                let (u, v) = (br.eval(&lo), br.eval(&hi));
                out.push(if u <= v { (u, v) } else { (v, u) });
            }
        }
        IntervalSet::from_pieces(out)
    }

    /// τ̂⁻¹(S) = ⋃ᵢ τᵢ⁻¹(S ∩ τᵢ(lap i)).
    pub fn hat_preimage_set(&self, s: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for i in 0..self.laps() {
            let (ilo, ihi) = self.branch_image(i);
            let br = &self.branches[i];
            for (c, d) in s.pieces() {
                let lo = c.clone().max(ilo.clone());
                let hi = d.clone().min(ihi.clone());
                if lo > hi {
                    continue;
                }
                let (u, v) = (br.inverse(&lo), br.inverse(&hi));
                out.push(if u <= v { (u, v) } else { (v, u) });
            }
        }
        IntervalSet::from_pieces(out)
    }

    pub fn classify(&self) -> Classification {
        let continuous = (1..self.laps()).all(|k| {
            let (l, r) = self.limits_at(k);
            l == r
        });
        let images: Vec<IntervalSet> =
            (0..self.laps()).map(|i| {
                let (a, b) = self.branch_image(i);
                IntervalSet::interval(a, b)
            }).collect();
        let union = images.iter().fold(IntervalSet::empty(), |acc, x| acc.union(x));
        let surjective_hat = union.is_unit();
        let mut essentially_injective = true;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i].interiors_meet(&images[j]) {
                    essentially_injective = false;
                }
            }
        }
        Classification { continuous, surjective_hat, essentially_injective }
    }

    /// Conjugate by `x ↦ 1 − x`.
    pub fn reflect(&self) -> Self {
        let one = Scalar::one();
        let mut bps: Vec<Scalar> = self.breakpoints.iter().map(|a| &one - a).collect();
        bps.reverse();
        let mut branches: Vec<Branch> = self
            .branches
            .iter()
            .map(|b| Branch::new(b.slope.clone(), &one - &b.intercept - &b.slope))
            .collect();
        branches.reverse();
        PLMap { breakpoints: bps, branches }
    }

    /// The map `x ↦ 1 − τ(x)`.
    pub fn upside_down(&self) -> Self {
        let one = Scalar::one();
        let branches = self.branches.iter().map(|b| Branch::new(-&b.slope, &one - &b.intercept)).collect();
        PLMap { breakpoints: self.breakpoints.clone(), branches }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "breakpoints": self.breakpoints.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "branches": self.branches.iter().map(|b| json!({
                "slope": scalar_to_json(&b.slope),
                "intercept": scalar_to_json(&b.intercept),
                "direction": b.direction().symbol(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Input description of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSpec {
    Tent { s: Scalar },
    Beta { beta: Scalar },
    UniformPl { s: Scalar, breakpoints: Vec<Scalar>, directions: Vec<Direction>, anchor: (Scalar, Scalar, usize) },
    Explicit { breakpoints: Vec<Scalar>, branches: Vec<Branch> },
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::invalid(key, "missing"))
}

fn scalar_list(v: &Value, key: &str, session: &mut Session) -> Result<Vec<Scalar>> {
    let arr = field(v, key)?.as_array().ok_or_else(|| Error::invalid(key, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| parse_scalar(x, session, &format!("{key}[{i}]"))).collect()
}

impl MapSpec {
    pub fn from_json(v: &Value, session: &mut Session) -> Result<Self> {
        let kind = field(v, "type")?.as_str().ok_or_else(|| Error::invalid("type", "expected a string"))?;
        match kind {
            "tent" => Ok(MapSpec::Tent { s: parse_scalar(field(v, "s")?, session, "s")? }),
            "beta" => Ok(MapSpec::Beta { beta: parse_scalar(field(v, "beta")?, session, "beta")? }),
            "uniform_pl" => {
                let s = parse_scalar(field(v, "s")?, session, "s")?;
                let breakpoints = scalar_list(v, "breakpoints", session)?;
                let dirs = field(v, "directions")?
                    .as_array()
                    .ok_or_else(|| Error::invalid("directions", "expected an array"))?;
                let directions = dirs
                    .iter()
                    .enumerate()
                    .map(|(i, d)| match d.as_str() {
                        Some("+") => Ok(Direction::Increasing),
                        Some("-") => Ok(Direction::Decreasing),
                        _ => Err(Error::invalid(format!("directions[{i}]"), "expected \"+\" or \"-\"")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let anchor = field(v, "anchor")?;
                let ax = parse_scalar(anchor.get("x").ok_or_else(|| Error::invalid("anchor.x", "missing"))?, session, "anchor.x")?;
                let ay = parse_scalar(anchor.get("y").ok_or_else(|| Error::invalid("anchor.y", "missing"))?, session, "anchor.y")?;
                let br = anchor
                    .get("branch")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::invalid("anchor.branch", "expected a branch index"))?;
                Ok(MapSpec::UniformPl { s, breakpoints, directions, anchor: (ax, ay, br as usize) })
            }
            "explicit" => {
                let breakpoints = scalar_list(v, "breakpoints", session)?;
                let arr = field(v, "branches")?
                    .as_array()
                    .ok_or_else(|| Error::invalid("branches", "expected an array"))?;
                let branches = arr
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        let f = format!("branches[{i}]");
                        let slope = b.get("slope").ok_or_else(|| Error::invalid(format!("{f}.slope"), "missing"))?;
                        let icpt = b.get("intercept").ok_or_else(|| Error::invalid(format!("{f}.intercept"), "missing"))?;
                        Ok(Branch::new(
                            parse_scalar(slope, session, &format!("{f}.slope"))?,
                            parse_scalar(icpt, session, &format!("{f}.intercept"))?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(MapSpec::Explicit { breakpoints, branches })
            }
            other => Err(Error::invalid("type", format!("unknown map type {other:?}"))),
        }
    }

    pub fn build(&self) -> Result<PLMap> {
        match self {
            MapSpec::Tent { s } => PLMap::tent(s),
            MapSpec::Beta { beta } => PLMap::beta(beta),
            MapSpec::UniformPl { s, breakpoints, directions, anchor } => {
                PLMap::uniform_pl(s, breakpoints.clone(), directions, (&anchor.0, &anchor.1, anchor.2))
            }
            MapSpec::Explicit { breakpoints, branches } => PLMap::new(breakpoints.clone(), branches.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            MapSpec::Tent { s } => json!({"type": "tent", "s": scalar_to_json(s)}),
            MapSpec::Beta { beta } => json!({"type": "beta", "beta": scalar_to_json(beta)}),
            MapSpec::UniformPl { s, breakpoints, directions, anchor } => json!({
                "type": "uniform_pl",
                "s": scalar_to_json(s),
                "breakpoints": breakpoints.iter().map(scalar_to_json).collect::<Vec<_>>(),
                "directions": directions.iter().map(|d| d.symbol()).collect::<Vec<_>>(),
                "anchor": {"x": scalar_to_json(&anchor.0), "y": scalar_to_json(&anchor.1), "branch": anchor.2},
            }),
            MapSpec::Explicit { breakpoints, branches } => json!({
                "type": "explicit",
                "breakpoints": breakpoints.iter().map(scalar_to_json).collect::<Vec<_>>(),
                "branches": branches.iter().map(|b| json!({
                    "slope": scalar_to_json(&b.slope), "intercept": scalar_to_json(&b.intercept)
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Parses and validates a map description.
pub fn build_map(v: &Value, session: &mut Session) -> Result<(MapSpec, PLMap)> {
    let spec = MapSpec::from_json(v, session)?;
    let map = spec.build()?;
    Ok((spec, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::AlgebraicContext;
    use num_bigint::BigInt;

    fn golden() -> Scalar {
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        Scalar::generator(&AlgebraicContext::new(&m, crate::number::rat::int(1), crate::number::rat::int(2)).unwrap())
    }

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::frac(p, d)
    }

    #[test]
    fn tent_two() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        assert_eq!(t.breakpoints(), &[Scalar::zero(), q(1, 2), Scalar::one()]);
        assert_eq!(t.branches()[0], Branch::new(Scalar::int(2), Scalar::zero()));
        assert_eq!(t.branches()[1], Branch::new(Scalar::int(-2), Scalar::int(2)));
        assert_eq!(t.hat_image_point(&q(1, 4)).unwrap(), vec![q(1, 2)]);
        assert_eq!(t.hat_image_point(&q(1, 2)).unwrap(), vec![Scalar::one()]);
        assert!(PLMap::tent(&q(1, 2)).is_err());
    }

    #[test]
    fn beta_golden() {
        let phi = golden();
        let b = PLMap::beta(&phi).unwrap();
        let inv = Scalar::one() / &phi;
        assert_eq!(b.breakpoints(), &[Scalar::zero(), inv.clone(), Scalar::one()]);
        assert_eq!(b.branches()[1].intercept, Scalar::int(-1));
        let c = b.classify();
        assert_eq!(c, Classification { continuous: false, surjective_hat: true, essentially_injective: false });
        // preimage of [0, 1/φ²]
        let pre = b.hat_preimage_set(&IntervalSet::interval(Scalar::zero(), inv.pow(2)));
        let expect = IntervalSet::from_pieces(vec![
            (Scalar::zero(), inv.pow(3)),
            (inv.clone(), &inv + inv.pow(3)),
        ]);
        assert_eq!(pre, expect);
    }

    #[test]
    fn beta_three_halves_jump() {
        let b = PLMap::beta(&q(3, 2)).unwrap();
        assert_eq!(b.hat_image_point(&q(2, 3)).unwrap(), vec![Scalar::zero(), Scalar::one()]);
        let b2 = PLMap::beta(&Scalar::int(2)).unwrap();
        assert_eq!(b2.laps(), 2);
    }

    #[test]
    fn images_and_classification() {
        let t = PLMap::tent(&Scalar::int(2)).unwrap();
        assert_eq!(t.hat_image_set(&IntervalSet::interval(Scalar::zero(), q(1, 4))), IntervalSet::interval(Scalar::zero(), q(1, 2)));
        assert_eq!(t.hat_image_set(&IntervalSet::interval(q(1, 4), q(3, 4))), IntervalSet::interval(q(1, 2), Scalar::one()));
        assert_eq!(
            t.classify(),
            Classification { continuous: true, surjective_hat: true, essentially_injective: false }
        );
        assert_eq!(
            PLMap::identity().classify(),
            Classification { continuous: true, surjective_hat: true, essentially_injective: true }
        );
    }

    #[test]
    fn rejects_bad_maps() {
        // two increasing continuous laps
        let r = PLMap::new(
            vec![Scalar::zero(), q(1, 2), Scalar::one()],
            vec![Branch::new(q(1, 2), Scalar::zero()), Branch::new(q(1, 2), Scalar::zero())],
        );
        assert!(r.is_err());
        let r = PLMap::new(vec![Scalar::zero(), Scalar::one()], vec![Branch::new(Scalar::int(2), Scalar::zero())]);
        assert!(matches!(r, Err(Error::Invalid { .. })));
    }

    #[test]
    fn uniform_pl_matches_tent() {
        let s = q(3, 2);
        let t = PLMap::tent(&s).unwrap();
        let c = t.breakpoints()[1].clone();
        let u = PLMap::uniform_pl(
            &s,
            t.breakpoints().to_vec(),
            &[Direction::Increasing, Direction::Decreasing],
            (&c, &Scalar::one(), 0),
        )
        .unwrap();
        assert_eq!(u, t);
        assert_eq!(t.reflect().reflect(), t);
    }
}
