//! Property suites for the algebraic and measure-theoretic invariants.

use num_bigint::BigInt;
use proptest::prelude::*;

use pwmap::decomposition::exact_decomposition;
use pwmap::dimension::{
    beta_presentation, ga_equal, ga_equal_search, ga_positive, ga_state, infinitesimal_exists, markov_presentation,
    Basis, BetaOutcome, GAElement, MarkovLimit, OrderRule, Positivity,
};
use pwmap::linalg::IntMatrix;
use pwmap::map_model::{Branch, IntervalSet, PLMap};
use pwmap::number::{rat, AlgebraicContext, Scalar};
use pwmap::symbolic::{MeasureWeights, StepFunction};
use pwmap::transfer::TransferContext;

fn algebraic(minpoly: &[i64], lo: i64, hi: i64) -> Scalar {
    let m: Vec<BigInt> = minpoly.iter().map(|&c| BigInt::from(c)).collect();
    Scalar::generator(&AlgebraicContext::new(&m, rat::int(lo), rat::int(hi)).unwrap())
}

fn limits() -> Vec<MarkovLimit> {
    let golden = algebraic(&[-1, -1, 1], 1, 2);
    let BetaOutcome::Companion(p) = beta_presentation(&golden, 32).unwrap() else { unreachable!() };
    vec![
        markov_presentation(&PLMap::tent(&Scalar::int(2)).unwrap(), 32).unwrap(),
        p.limit(),
        // Singular and reducible: kernel classes collapse to zero.
        MarkovLimit {
            a: IntMatrix::from_i64(&[vec![1, 1, 0], vec![1, 1, 0], vec![1, 1, 1]]),
            s: Scalar::int(2),
            weights: vec![Scalar::one(), Scalar::one(), Scalar::int(2)],
            order: OrderRule::Iterative { depth: 50 },
            basis: Basis::Abstract,
        },
    ]
}

fn element(q: usize) -> impl Strategy<Value = GAElement> {
    (prop::collection::vec(-4i64..=4, q), 0usize..3).prop_map(|(v, n)| GAElement::from_i64(&v, n))
}

fn with_limit() -> impl Strategy<Value = (usize, GAElement, GAElement, GAElement)> {
    (0usize..3).prop_flat_map(|i| {
        let q = if i == 2 { 3 } else { 2 };
        (Just(i), element(q), element(q), element(q))
    })
}

fn uniform_maps() -> Vec<PLMap> {
    let q = Scalar::frac;
    vec![
        PLMap::tent(&Scalar::int(2)).unwrap(),
        PLMap::tent(&q(3, 2)).unwrap(),
        PLMap::tent(&algebraic(&[-2, 0, 1], 1, 2)).unwrap(),
        PLMap::beta(&algebraic(&[-1, -1, 1], 1, 2)).unwrap(),
        PLMap::beta(&q(5, 2)).unwrap(),
        PLMap::new(
            vec![q(0, 1), q(1, 5), q(3, 5), q(1, 1)],
            vec![Branch::new(q(5, 2), q(1, 2)), Branch::new(q(-5, 2), q(3, 2)), Branch::new(q(5, 2), q(-3, 2))],
        )
        .unwrap(),
    ]
}

fn step_function(nonnegative: bool) -> impl Strategy<Value = StepFunction> {
    let lo = if nonnegative { 0 } else { -6 };
    (prop::collection::vec((1i64..40, 41i64..80), 0..5), prop::collection::vec(lo..=6i64, 6)).prop_map(
        |(cuts, values)| {
            let mut c: Vec<Scalar> = cuts.into_iter().map(|(p, d)| Scalar::frac(p, d)).collect();
            c.sort();
            c.dedup();
            let v = values.into_iter().take(c.len() + 1).map(Scalar::int).collect();
            StepFunction::new(c, v).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ga_equal_is_an_equivalence((i, x, y, z) in with_limit()) {
        let t = &limits()[i];
        prop_assert!(ga_equal(t, &x, &x));
        prop_assert_eq!(ga_equal(t, &x, &y), ga_equal(t, &y, &x));
        if ga_equal(t, &x, &y) && ga_equal(t, &y, &z) {
            prop_assert!(ga_equal(t, &x, &z));
        }
        let lifted = GAElement::new(t.a.left_mul(&x.v), x.n + 1);
        prop_assert!(ga_equal(t, &x, &lifted));
    }

    #[test]
    fn state_is_constant_on_classes_and_scales((i, x, y, _z) in with_limit()) {
        let t = &limits()[i];
        let lifted = GAElement::new(t.a.left_mul(&x.v), x.n + 1);
        prop_assert_eq!(ga_state(t, &x), ga_state(t, &lifted));
        if ga_equal(t, &x, &y) {
            prop_assert_eq!(ga_state(t, &x), ga_state(t, &y));
        }
        prop_assert_eq!(ga_state(t, &t.shift(&x)), &t.s * &ga_state(t, &x));
    }

    #[test]
    fn positivity_agrees_with_state((i, x, _y, _z) in with_limit()) {
        let t = &limits()[i];
        let p = ga_positive(t, &x);
        let sign = ga_state(t, &x).sign();
        match p {
            Positivity::Positive => prop_assert!(sign > 0),
            Positivity::Negative => prop_assert!(sign < 0),
            Positivity::Zero => prop_assert!(ga_equal(t, &x, &GAElement::zero(t.size()))),
            _ => {}
        }
        let flipped = match p {
            Positivity::Positive => Positivity::Negative,
            Positivity::Negative => Positivity::Positive,
            other => other,
        };
        prop_assert_eq!(ga_positive(t, &t.neg(&x)), flipped);
    }

    #[test]
    fn no_incomparables_without_infinitesimals((i, x, _y, _z) in with_limit()) {
        let t = &limits()[i];
        if t.order == OrderRule::Strict && !infinitesimal_exists(t) {
            prop_assert_ne!(ga_positive(t, &x), Positivity::Incomparable);
        }
    }

    #[test]
    fn k_equals_q_matches_search(rows in prop::collection::vec(0i64..=2, 9), x in element(3), y in element(3)) {
        let a = IntMatrix::from_i64(&rows.chunks(3).map(<[i64]>::to_vec).collect::<Vec<_>>());
        let t = MarkovLimit { a, s: Scalar::one(), weights: vec![Scalar::zero(); 3], order: OrderRule::Strict, basis: Basis::Abstract };
        prop_assert_eq!(ga_equal(&t, &x, &y), ga_equal_search(&t, &x, &y, 12));
    }

    #[test]
    fn beta_companion_intertwines(which in 0usize..4, v in prop::collection::vec(-5i64..=5, 3)) {
        let beta = [
            algebraic(&[-1, -1, 1], 1, 2),
            Scalar::int(2),
            algebraic(&[-1, -2, 1], 2, 3),
            algebraic(&[-1, -1, -1, 1], 1, 2),
        ][which].clone();
        let BetaOutcome::Companion(p) = beta_presentation(&beta, 32).unwrap() else { unreachable!() };
        let map = PLMap::beta(&beta).unwrap();
        let ctx = TransferContext::new(&map);
        let v: Vec<BigInt> = v.into_iter().take(p.b.nrows()).map(BigInt::from).collect();
        let psi = |w: &[BigInt]| {
            let mut f = StepFunction::constant(Scalar::one());
            let mut parts = Vec::new();
            for c in w {
                parts.push(f.scale(&Scalar::from_bigint(c.clone())));
                f = ctx.apply(&f);
            }
            StepFunction::sum_all(&parts)
        };
        prop_assert_eq!(psi(&p.b.left_mul(&v)), ctx.apply(&psi(&v)));
    }

    #[test]
    fn transfer_scales_lebesgue_and_pf_preserves_mass(which in 0usize..6, f in step_function(false)) {
        let map = &uniform_maps()[which];
        let s = map.uniform_slope().unwrap();
        let ctx = TransferContext::new(map);
        let leb = MeasureWeights::lebesgue();
        prop_assert_eq!(ctx.apply(&f).integrate(&leb), &s * &f.integrate(&leb));
        prop_assert_eq!(ctx.pf_apply(&f, &s).unwrap().integrate(&leb), f.integrate(&leb));
    }

    #[test]
    fn support_of_image_is_image_of_support(which in 0usize..6, f in step_function(true)) {
        let map = &uniform_maps()[which];
        let ctx = TransferContext::new(map);
        prop_assert_eq!(ctx.apply(&f).support(), map.regular_image_set(&f.support()));
    }

    #[test]
    fn parts_are_cycled_by_the_map(a in 0i64..1000, b in 0i64..1000) {
        let map = PLMap::tent(&algebraic(&[-2, 0, 1], 1, 2)).unwrap();
        let dec = exact_decomposition(&map, 64).unwrap();
        prop_assume!(a != b);
        let (lo, hi) = (Scalar::frac(a.min(b), 1000), Scalar::frac(a.max(b), 1000));
        let j = IntervalSet::interval(lo, hi);
        if let Some(i) = dec.part_containing(&j) {
            let next = (i + 1) % dec.n;
            prop_assert!(dec.parts[next].contains_set(&map.hat_image_set(&j)));
        } else {
            prop_assert!(dec.parts.iter().all(|p| p.interiors_meet(&j)));
        }
    }
}
