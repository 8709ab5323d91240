use std::path::PathBuf;
use std::process::{Command, Output};

use lame_core::gf2::FieldContext;
use lame_core::lame::two_torsion_point;
use lame_core::weierstrass::{CurvePoint, WeierstrassCurve};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lame")).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file exists")
}

fn check_golden(args: &[&str], name: &str) {
    let first = run(args);
    let second = run(args);
    assert!(first.status.success(), "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout, "{args:?} is not deterministic");
    assert_eq!(String::from_utf8(first.stdout).unwrap(), golden(name), "{args:?} differs from {name}");
}

#[test]
fn outputs_match_golden_files() {
    check_golden(&["classify", "--order", "5"], "classify_5.json");
    check_golden(&["ramify", "--order", "7"], "ramify_7.json");
    check_golden(&["ramify", "--order", "5", "--ordinary", "1", "--field", "4"], "ramify_5_ordinary.json");
    check_golden(&["counts", "--max-n", "13", "--csv"], "counts_13.csv");
    check_golden(&["triples", "--degree", "9"], "triples_9.json");
    check_golden(&["moduli", "--d", "2"], "moduli_2.json");
    check_golden(&["hyper", "--genus", "2", "--field", "1"], "hyper_2_1.json");
    check_golden(&["jcheck", "--samples", "50", "--seed", "1"], "jcheck_50_1.json");
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn report_envelope() {
    let v = json_of(&["classify", "--order", "9"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"]["classes"].as_array().unwrap().len(), 3);
    let c5 = json_of(&["classify", "--order", "5"]);
    assert_eq!(c5["result"]["classes"][0]["rho"]["hex"], "1");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["classify", "--order", "4"],
        vec!["classify", "--order", "15"],
        vec!["triples", "--degree", "8"],
        vec!["ramify", "--order", "5", "--ordinary", "1"],
        vec!["moduli", "--d", "9"],
        vec!["ramify", "--order", "3", "--ordinary", "0", "--field", "4"],
        vec!["bogus"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_checks_exit_with_one() {
    let out = run(&["hyper", "--genus", "3", "--field", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["result"]["supersingular"], false);
}

fn point_of(v: &Value, ctx: &'static FieldContext) -> CurvePoint {
    let x = ctx.parse_hex(v["x"]["hex"].as_str().unwrap()).unwrap();
    let y = ctx.parse_hex(v["y"]["hex"].as_str().unwrap()).unwrap();
    CurvePoint::affine(x, y)
}

#[test]
fn ramify_reports_the_expected_third_point() {
    let v = json_of(&["ramify", "--order", "3"]);
    let r = &v["result"];
    assert_eq!(r["branch_datum"], "(3:3:3)");
    assert_eq!(r["q"]["x"]["hex"], "0");
    assert_eq!(r["q"]["y"]["hex"], "1");

    let v = json_of(&["ramify", "--order", "5", "--ordinary", "1", "--field", "4"]);
    let r = &v["result"];
    let ctx = FieldContext::of(r["field_degree"].as_u64().unwrap() as u32);
    let e = WeierstrassCurve::ordinary(ctx.one()).unwrap();
    let p = point_of(&r["p"], ctx);
    let q = point_of(&r["q"], ctx);
    let three_p = e.mul_u128(3, &p);
    assert_eq!(q, e.add(&three_p, &two_torsion_point(&e).unwrap()));
    let wild: Vec<&Value> = r["ramified"].as_array().unwrap().iter().filter(|x| x["index"] == 2).collect();
    assert_eq!(wild.len(), 1);
    assert_eq!(wild[0]["different"], 2);
    assert_eq!(wild[0]["tame"], false);
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("lame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("counts.csv");
    let out = run(&["counts", "--max-n", "13", "--csv", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("counts_13.csv"));
    std::fs::remove_dir_all(dir).unwrap();
}
