//! End-to-end tests of the `floerkit` binary on the sample inputs in `data/`.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_floerkit")).args(args).output().expect("binary runs");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().expect("exit code"), doc)
}

fn ok(args: &[&str]) -> Value {
    let (code, doc) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {doc}");
    assert_eq!(doc["schema_version"], 1);
    doc
}

#[test]
fn version_and_presets() {
    let v = ok(&["version"]);
    assert_eq!(v["name"], "floerkit");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let p = ok(&["presets"]);
    let names: Vec<&str> = p["details"].as_array().unwrap().iter().map(|d| d["name"].as_str().unwrap()).collect();
    for n in ["cp1", "cp2", "f2", "f4"] {
        assert!(names.contains(&n), "{n} missing from {names:?}");
    }
}

#[test]
fn selftest_passes() {
    assert_eq!(ok(&["selftest"])["ok"], true);
}

#[test]
fn parse_errors_exit_with_two() {
    let (code, doc) = run(&["filtered", "barcode", "--complex", "/nonexistent/complex.json"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "parse");
    let (code, _) = run(&["potential", "analyze", "--preset", "cp1", "--precision", "abc"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["potential", "analyze", "--preset", "no-such-preset"]);
    assert_eq!(code, 2);
}

#[test]
fn budget_exhaustion_exits_with_four() {
    let (code, doc) = run(&["bulk", "search", "--preset", "cp1xcp1", "--trials", "1"]);
    assert_eq!(code, 4);
    assert_eq!(doc["error"]["kind"], "budget");
}

#[test]
fn potential_analyze_polytope_file_matches_preset() {
    let file = ok(&["potential", "analyze", "--polytope", &data("f4.json")]);
    let preset = ok(&["potential", "analyze", "--preset", "f4"]);
    assert_eq!(file["certificates"], preset["certificates"]);
    let c = &file["certificates"];
    assert_eq!(c["inside"], 4);
    assert_eq!(c["outside"], 2);
    assert_eq!(c["kouchnirenko_bound"], 6);
    assert_eq!(c["morse"], true);
    assert_eq!(c["distinct_values"], true);
}

#[test]
fn filtered_commands() {
    let b = ok(&["filtered", "barcode", "--complex", &data("two_bars.json")]);
    assert_eq!(b["barcode"]["finite_bars"], serde_json::json!(["1", "1/4"]));
    assert_eq!(b["barcode"]["infinite_bars"], 1);
    assert_eq!(b["barcode"]["endpoint_count"], 5);
    assert_eq!(ok(&["filtered", "depth", "--complex", &data("two_bars.json")])["boundary_depth"], "1");
    assert_eq!(ok(&["filtered", "tau", "--complex", &data("two_bars.json")])["total_bar_length"], "5/4");
    let rho = ok(&["filtered", "rho", "--complex", &data("two_bars.json"), "--chain", "m=1", "--chain", "b=T"]);
    let values: Vec<&str> =
        rho["spectral_invariants"].as_array().unwrap().iter().map(|s| s["rho"].as_str().unwrap()).collect();
    assert_eq!(values, ["2", "-inf"]);
    let d = ok(&[
        "filtered",
        "bottleneck",
        "--complex",
        &data("two_bars.json"),
        "--other",
        &data("two_bars_shifted.json"),
    ]);
    assert_eq!(d["bottleneck"], "1/8");
}

#[test]
fn tate_check_single_bar() {
    let t = ok(&["tate", "check", "--complex", &data("bar.json"), "--p", "3", "--window", "4"]);
    assert_eq!(t["base_torsion"], "1/2");
    assert_eq!(t["tate_torsion"], "3/2");
    assert_eq!(t["ratio"], "3");
    assert_eq!(t["quasi_frobenius"], "ok");
}

#[test]
fn algebra_split_and_transfer() {
    let s = ok(&["algebra", "split", "--file", &data("cp1_algebra.json"), "--precision", "6", "--mod-p", "5"]);
    assert_eq!(s["split"]["valuations"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(s["transfer"]["valuations_match"], true);
    assert_eq!(s["transfer"]["field"], "F_5");
    let (code, doc) = run(&["algebra", "split", "--file", &data("cp1_algebra.json"), "--mod-p", "2"]);
    assert_ne!(code, 0);
    assert!(doc["error"]["message"].as_str().unwrap().contains("too small"));
}

#[test]
fn pipeline_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("floerkit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cp1.json");
    let path_str = path.to_string_lossy().into_owned();
    let out = Command::new(env!("CARGO_BIN_EXE_floerkit"))
        .args(["pipeline", "--preset", "cp1", "--seed", "3", "--output", &path_str])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, ok(&["pipeline", "--preset", "cp1", "--seed", "3"]));
    std::fs::remove_dir_all(&dir).unwrap();
}
