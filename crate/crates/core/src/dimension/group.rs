//! Stationary inductive limits `Zᵠ →A Zᵠ →A ⋯` with a scaled state.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::linalg::IntMatrix;
use crate::number::context::factor;
use crate::number::{scalar_to_json, QPoly, Scalar};

/// The class `[v, n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GAElement {
    pub v: Vec<BigInt>,
    pub n: usize,
}

impl GAElement {
    pub fn new(v: Vec<BigInt>, n: usize) -> Self {
        GAElement { v, n }
    }

    pub fn from_i64(v: &[i64], n: usize) -> Self {
        GAElement { v: v.iter().map(|&x| BigInt::from(x)).collect(), n }
    }

    pub fn zero(q: usize) -> Self {
        GAElement { v: vec![BigInt::zero(); q], n: 0 }
    }

    pub fn to_json(&self) -> Value {
        json!({"v": self.v.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "n": self.n})
    }
}

/// How the positive cone is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderRule {
    /// Strict order from the unique state (primitive, exact case).
    Strict,
    /// Product of strict orders over the cyclic classes of an irreducible
    /// matrix of period `N`.
    Cyclic { period: usize, classes: Vec<usize> },
    /// Eventual entrywise positivity of `vAᵏ`, tried for `k ≤ depth`.
    Iterative { depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Indicators of the listed intervals.
    Intervals(Vec<(Scalar, Scalar)>),
    /// `I(0,1), L·I(0,1), …, L^{q-1}·I(0,1)`.
    PowersOfL,
    /// Matrix-level data with no underlying map.
    Abstract,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovLimit {
    pub a: IntMatrix,
    pub s: Scalar,
    /// State values of the basis vectors; `A·w = s·w`.
    pub weights: Vec<Scalar>,
    pub order: OrderRule,
    pub basis: Basis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Positive,
    Zero,
    Negative,
    Incomparable,
    Undetermined,
}

impl Positivity {
    pub fn label(self) -> &'static str {
        match self {
            Positivity::Positive => "positive",
            Positivity::Zero => "zero",
            Positivity::Negative => "negative",
            Positivity::Incomparable => "incomparable",
            Positivity::Undetermined => "undetermined",
        }
    }
}

/// Default depth for the iterative positivity rule.
pub const POSITIVITY_DEPTH: usize = 50;

impl MarkovLimit {
    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    /// True when `A·w = s·w` holds exactly.
    pub fn weights_are_eigenvector(&self) -> bool {
        let aw = self.a.right_mul_scalar(&self.weights);
        aw.iter().zip(&self.weights).all(|(x, w)| *x == &self.s * w)
    }

    /// `A_*[v, n] = [vA, n]`.
    pub fn shift(&self, x: &GAElement) -> GAElement {
        GAElement { v: self.a.left_mul(&x.v), n: x.n }
    }

    pub fn add(&self, x: &GAElement, y: &GAElement) -> GAElement {
        let n = x.n.max(y.n);
        let lift = |e: &GAElement| {
            let mut v = e.v.clone();
            for _ in e.n..n {
                v = self.a.left_mul(&v);
            }
            v
        };
        let (u, w) = (lift(x), lift(y));
        GAElement { v: u.iter().zip(&w).map(|(a, b)| a + b).collect(), n }
    }

    pub fn neg(&self, x: &GAElement) -> GAElement {
        GAElement { v: x.v.iter().map(|a| -a).collect(), n: x.n }
    }

    pub fn charpoly(&self) -> Vec<BigInt> {
        self.a.charpoly()
    }

    pub fn to_json(&self) -> Value {
        let (order, classes) = match &self.order {
            OrderRule::Strict => ("strict_state", Value::Null),
            OrderRule::Cyclic { period, classes } => ("cyclic_product", json!({"period": period, "classes": classes})),
            OrderRule::Iterative { depth } => ("eventual_positivity", json!({"depth": depth})),
        };
        let basis = match &self.basis {
            Basis::Intervals(iv) => {
                json!(iv.iter().map(|(a, b)| json!([scalar_to_json(a), scalar_to_json(b)])).collect::<Vec<_>>())
            }
            Basis::PowersOfL => json!("powers_of_L"),
            Basis::Abstract => json!("abstract"),
        };
        let a: Vec<Vec<String>> = self.a.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        json!({
            "kind": "markov_limit",
            "A": a,
            "s": scalar_to_json(&self.s),
            "weights": self.weights.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "charpoly": self.charpoly().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "infinitesimals": matches!(self.order, OrderRule::Strict).then(|| infinitesimal_exists(self)),
            "order": order,
            "order_data": classes,
            "basis": basis,
        })
    }
}

fn apply_power(a: &IntMatrix, v: &[BigInt], k: usize) -> Vec<BigInt> {
    (0..k).fold(v.to_vec(), |w, _| a.left_mul(&w))
}

/// `[v₁,n₁] = [v₂,n₂]` iff `v₁A^{n₂+q} = v₂A^{n₁+q}`: the kernel chain of
/// `Aᵏ` is stable from `k = q`, so `k = q` is a witness whenever any is.
pub fn ga_equal(t: &MarkovLimit, x: &GAElement, y: &GAElement) -> bool {
    let q = t.size();
    assert_eq!(x.v.len(), q, "element length must match the matrix");
    assert_eq!(y.v.len(), q, "element length must match the matrix");
    apply_power(&t.a, &x.v, y.n + q) == apply_power(&t.a, &y.v, x.n + q)
}

/// Brute-force equality: some `k ≤ max_k` with `v₁A^{n₂+k} = v₂A^{n₁+k}`.
pub fn ga_equal_search(t: &MarkovLimit, x: &GAElement, y: &GAElement, max_k: usize) -> bool {
    let mut u = apply_power(&t.a, &x.v, y.n);
    let mut w = apply_power(&t.a, &y.v, x.n);
    for _ in 0..=max_k {
        if u == w {
            return true;
        }
        u = t.a.left_mul(&u);
        w = t.a.left_mul(&w);
    }
    false
}

/// `ω([v,n]) = s⁻ⁿ Σ vᵢ wᵢ`.
pub fn ga_state(t: &MarkovLimit, x: &GAElement) -> Scalar {
    let dot: Scalar = x.v.iter().zip(&t.weights).map(|(a, w)| Scalar::from_bigint(a.clone()) * w).sum();
    dot * t.s.pow(-(x.n as i32))
}

fn strict_sign(t: &MarkovLimit, x: &GAElement) -> Positivity {
    if ga_equal(t, x, &GAElement::zero(t.size())) {
        return Positivity::Zero;
    }
    match ga_state(t, x).sign() {
        1 => Positivity::Positive,
        -1 => Positivity::Negative,
        _ => Positivity::Incomparable,
    }
}

/// Eventual entrywise sign of `vAᵏ` for `k ≤ depth`.
pub fn ga_positive_iterative(t: &MarkovLimit, x: &GAElement, depth: usize) -> Positivity {
    let mut w = x.v.clone();
    for _ in 0..=depth {
        if w.iter().all(Zero::is_zero) {
            return Positivity::Zero;
        }
        if w.iter().all(|a| !a.is_negative()) {
            return Positivity::Positive;
        }
        if w.iter().all(|a| !a.is_positive()) {
            return Positivity::Negative;
        }
        w = t.a.left_mul(&w);
    }
    Positivity::Undetermined
}

/// Combines per-component signs under the product cone.
pub fn combine_signs(signs: &[Positivity]) -> Positivity {
    use Positivity::*;
    if signs.contains(&Undetermined) {
        return Undetermined;
    }
    if signs.contains(&Incomparable) {
        return Incomparable;
    }
    let pos = signs.contains(&Positive);
    let neg = signs.contains(&Negative);
    match (pos, neg) {
        (false, false) => Zero,
        (true, false) => Positive,
        (false, true) => Negative,
        (true, true) => Incomparable,
    }
}

/// Component of `[v,n]` on cyclic class `r`: the entries of `v` on class `r + n`.
pub fn class_component(x: &GAElement, classes: &[usize], period: usize, r: usize) -> GAElement {
    let c = (r + x.n) % period;
    let v = x.v.iter().zip(classes).map(|(a, &k)| if k == c { a.clone() } else { BigInt::zero() }).collect();
    GAElement { v, n: x.n }
}

pub fn ga_positive(t: &MarkovLimit, x: &GAElement) -> Positivity {
    match &t.order {
        OrderRule::Strict => strict_sign(t, x),
        OrderRule::Cyclic { period, classes } => {
            let signs: Vec<Positivity> =
                (0..*period).map(|r| strict_sign(t, &class_component(x, classes, *period, r))).collect();
            combine_signs(&signs)
        }
        OrderRule::Iterative { depth } => ga_positive_iterative(t, x, *depth),
    }
}

/// `p(t)` with its largest power of `t` divided out.
pub fn strip_t_power(cp: &[BigInt]) -> QPoly {
    let k = cp.iter().take_while(|c| c.is_zero()).count();
    QPoly::from_bigints(&cp[k..])
}

/// Factorization of the stripped characteristic polynomial over Q; there are
/// infinitesimals iff it is reducible.
pub fn infinitesimals_from_charpoly(cp: &[BigInt]) -> (bool, Vec<(QPoly, usize)>) {
    let p = strip_t_power(cp);
    if p.is_constant() {
        return (false, Vec::new());
    }
    let f = factor(&p);
    let reducible = f.len() > 1 || f.iter().any(|(_, m)| *m > 1);
    (reducible, f)
}

pub fn infinitesimal_exists(t: &MarkovLimit) -> bool {
    infinitesimals_from_charpoly(&t.charpoly()).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::AlgebraicContext;

    fn limit(rows: &[Vec<i64>], s: Scalar, w: Vec<Scalar>) -> MarkovLimit {
        MarkovLimit { a: IntMatrix::from_i64(rows), s, weights: w, order: OrderRule::Strict, basis: Basis::Abstract }
    }

    fn phi() -> Scalar {
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        Scalar::generator(&AlgebraicContext::new(&m, crate::number::rat::int(1), crate::number::rat::int(2)).unwrap())
    }

    #[test]
    fn equality_examples() {
        let t = limit(&[vec![1, 1], vec![1, 1]], Scalar::int(2), vec![Scalar::frac(1, 2); 2]);
        let x = GAElement::from_i64(&[1, 0], 0);
        assert!(ga_equal(&t, &x, &GAElement::from_i64(&[0, 1], 0)));
        assert!(ga_equal(&t, &x, &GAElement::new(t.a.left_mul(&x.v), 1)));
        assert_eq!(ga_positive(&t, &GAElement::from_i64(&[1, -1], 0)), Positivity::Zero);
        let p = phi();
        let g = limit(&[vec![1, 1], vec![1, 0]], p.clone(), vec![&p - Scalar::one(), Scalar::int(2) - &p]);
        assert!(!ga_equal(&g, &GAElement::from_i64(&[1, 0], 0), &GAElement::from_i64(&[0, 1], 0)));
        assert_eq!(ga_positive(&g, &GAElement::from_i64(&[1, 0], 0)), Positivity::Positive);
        assert!(g.weights_are_eigenvector());
    }

    #[test]
    fn state_scaling() {
        let p = phi();
        let g = limit(&[vec![1, 1], vec![1, 0]], p.clone(), vec![&p - Scalar::one(), Scalar::int(2) - &p]);
        let x = GAElement::from_i64(&[3, -1], 2);
        assert_eq!(ga_state(&g, &g.shift(&x)), &p * ga_state(&g, &x));
        assert_eq!(ga_state(&g, &GAElement::from_i64(&[1, 1], 0)), Scalar::one());
    }

    #[test]
    fn charpoly_factorizations() {
        let cp = |c: &[i64]| c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(infinitesimals_from_charpoly(&cp(&[-2, -3, 0, 1])).0);
        assert!(!infinitesimals_from_charpoly(&cp(&[-1, -1, 1])).0);
        assert!(!infinitesimals_from_charpoly(&cp(&[0, -2, 1])).0);
    }

    #[test]
    fn cyclic_order_on_swap() {
        let t = MarkovLimit {
            a: IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]),
            s: Scalar::one(),
            weights: vec![Scalar::frac(1, 2); 2],
            order: OrderRule::Cyclic { period: 2, classes: vec![0, 1] },
            basis: Basis::Abstract,
        };
        assert_eq!(ga_positive(&t, &GAElement::from_i64(&[1, 0], 0)), Positivity::Positive);
        assert_eq!(ga_positive(&t, &GAElement::from_i64(&[1, -1], 0)), Positivity::Incomparable);
        assert_eq!(ga_positive(&t, &GAElement::from_i64(&[-1, 0], 3)), Positivity::Negative);
    }
}
