use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwmap")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_full_tent() {
    let out = run(&["analyze", "--map", &data("tent2.json"), "--skip-pf"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["markov"]["incidence"], serde_json::json!([[1, 1], [1, 1]]));
    assert_eq!(r["markov"]["s"], "2");
    assert_eq!(r["dimension"]["state_range"]["group"], "Z[1/2]");
    assert_eq!(r["decomposition"]["decomposition"]["N"], 1);
    assert_eq!(r["dimension"]["infinitesimals"]["exists"], false);
}

#[test]
fn dimension_of_golden_beta() {
    let out = run(&["dimension", "--map", &data("beta_golden.json")]);
    assert!(out.status.success());
    let r = json(&out);
    let b = &r["beta"]["presentation"];
    assert_eq!(b["m"], serde_json::json!(["-1", "-1", "1"]));
    assert_eq!(b["B"], serde_json::json!([["0", "1"], ["1", "1"]]));
    assert_eq!(r["state_range"]["backend"], "unit_lattice");
    assert_eq!(r["state_range"]["group"], "Z·(1) + Z·(s)");
}

#[test]
fn flipped_trimodal_is_not_conjugate() {
    let out = run(&["compare", "--map", &data("trimodal.json"), "--map2", &data("trimodal_flipped.json")]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["verdict"], "not_conjugate");
    assert_eq!(r["reason"], "first-interval direction");
}

#[test]
fn invalid_literal_exits_two_and_names_field() {
    let out = run(&["markov", "--map", &data("bad_literal.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("invalid s"), "{err}");
}

#[test]
fn missing_file_exits_two() {
    let out = run(&["markov", "--map", &data("no_such_map.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--map"));
}

#[test]
fn bad_tolerance_exits_two() {
    let out = run(&["entropy", "--map", &data("tent2.json"), "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn essentially_injective_decomposition_exits_three() {
    let out = run(&["decompose", "--map", &data("half_rotation.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "unsupported");
}

#[test]
fn non_transitive_tent_reports_witness() {
    let out = run(&["decompose", "--map", &data("tent_6_5.json"), "--bound", "64"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["transitivity"]["verdict"], "not_transitive");
    assert!(r["transitivity"]["witness"].is_array());
}

#[test]
fn reports_are_byte_identical() {
    let args = ["analyze", "--map", &data("beta_golden.json")];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_lives_in_an_envelope() {
    let plain = json(&run(&["markov", "--map", &data("tent2.json")]));
    let timed = json(&run(&["markov", "--map", &data("tent2.json"), "--timing"]));
    assert_eq!(timed["report"], plain);
    assert!(timed["timing"]["elapsed_ms"].is_number());
    assert!(plain.get("timing").is_none());
}

#[test]
fn text_format_marks_approximations() {
    let out = run(&["markov", "--map", &data("beta_golden.json"), "--format", "text"]);
    assert!(out.status.success());
    let t = String::from_utf8_lossy(&out.stdout);
    assert!(t.contains("s: ≈1.618033988750"), "{t}");
}

#[test]
fn pf_on_sqrt_two_tent_passes_cycle_check() {
    let out = run(&["pf", "--map", &data("tent_sqrt2.json")]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["report"]["N"], 2);
    assert_eq!(r["verify_cycle"]["pass"], true);
}

#[test]
fn three_halves_beta_falls_back() {
    let out = run(&["dimension", "--map", &data("beta_3_2.json"), "--bound", "64"]);
    let r = json(&out);
    assert_eq!(r["beta"]["kind"], "fallback");
    assert_eq!(r["presentation"]["kind"], "laurent_cyclic");
    assert_eq!(r["state_range"]["group"], "Z[1/6]");
}

#[test]
fn generic_s_switches_backend() {
    let out = run(&["dimension", "--map", &data("tent_3_2.json"), "--bound", "64", "--generic-s"]);
    let r = json(&out);
    assert_eq!(r["state_range"]["backend"], "generic_symbolic");
    assert_eq!(r["infinitesimals"]["exists"], false);
}

#[test]
fn oracles() {
    let r = json(&run(&["oracle", "ga-equal", "--matrix", "[[1,1],[1,0]]", "--x", "[1,0]", "--y", "[0,1]"]));
    assert_eq!(r["k_equals_q"], false);
    assert_eq!(r["agree"], true);
    let r = json(&run(&["oracle", "pf-solve", "--map", &data("beta_golden.json")]));
    assert_eq!(r["cycle_residual_zero"], true);
    let r = json(&run(&["oracle", "cylinders", "--map", &data("tent2.json"), "--n", "5"]));
    assert_eq!(r["counts"], serde_json::json!(["2", "4", "8", "16", "32"]));
}

#[test]
fn every_corpus_map_analyzes() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name.starts_with("bad_") {
            continue;
        }
        let out = run(&["analyze", "--map", path.to_str().unwrap(), "--bound", "64", "--skip-pf"]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
