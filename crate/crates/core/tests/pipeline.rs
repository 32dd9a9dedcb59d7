//! JSON specifications through to exact invariants.

use serde_json::json;

use pwmap::decomposition::exact_decomposition;
use pwmap::dimension::presentation;
use pwmap::map_model::build_map;
use pwmap::markov::{entropy, EntropyMethod};
use pwmap::number::{Scalar, Session};
use pwmap::Error;

#[test]
fn algebraic_tent_from_json() {
    let spec = json!({"type": "tent", "s": {"minpoly": [-2, 0, 1], "interval": ["1", "2"]}});
    let (_, map) = build_map(&spec, &mut Session::new()).unwrap();
    let s = map.uniform_slope().unwrap();
    assert_eq!(&s * &s, Scalar::int(2));
    assert_eq!(exact_decomposition(&map, 64).unwrap().n, 2);
    assert_eq!(presentation(&map, 64).unwrap().kind(), "direct_sum");
}

#[test]
fn explicit_map_from_json() {
    let spec = json!({"type": "explicit", "breakpoints": ["0", "1/5", "3/5", "1"],
        "branches": [{"slope": "5/2", "intercept": "1/2"}, {"slope": "-5/2", "intercept": "3/2"},
                     {"slope": "5/2", "intercept": "-3/2"}]});
    let (_, map) = build_map(&spec, &mut Session::new()).unwrap();
    assert_eq!(map.laps(), 3);
    assert_eq!(map.uniform_slope(), Some(Scalar::frac(5, 2)));
    let method = EntropyMethod::PowerIteration { tol: pwmap::number::rat::frac(1, 1_000_000), maxiter: 200 };
    let e = entropy(&map, &method, 64).unwrap();
    let h = 2.5f64.ln();
    assert!(e.converged && e.h_bracket.0 <= h && h <= e.h_bracket.1);
}

#[test]
fn bad_literal_names_its_field() {
    let err = build_map(&json!({"type": "tent", "s": "two"}), &mut Session::new()).unwrap_err();
    assert!(matches!(err, Error::Invalid { .. }), "{err:?}");
    assert!(err.to_string().contains("s"));
}

#[test]
fn inconsistent_breakpoints_are_rejected() {
    let spec = json!({"type": "explicit", "breakpoints": ["0", "1/2"],
        "branches": [{"slope": "1", "intercept": "0"}]});
    assert!(build_map(&spec, &mut Session::new()).is_err());
}
