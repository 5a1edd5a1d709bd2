use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_closefields")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn fields_build_reports_ramification() {
    let un = run_json(&["fields", "build", "--case", "unramified", "--p", "2", "--l", "3", "--m", "1"]);
    assert_eq!(un["result"]["e"], 1);
    assert_eq!(un["library_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(un["config"]["p"], 2);
    let ram = run_json(&["fields", "build", "--case", "ramified", "--p", "3", "--l", "2"]);
    assert_eq!(ram["result"]["e"], 2);
}

#[test]
fn invalid_configurations_exit_with_two() {
    for args in [
        &["fields", "build", "--p", "3", "--l", "3"][..],
        &["fields", "build", "--case", "ramified", "--p", "2", "--l", "3"],
        &["check", "kaz-hom", "--m", "2", "--pair-mode", "mixed-equal"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("CONFIG_INVALID"));
    }
}

#[test]
fn main_diagram_check_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "check", "main-diagram", "--case", "ramified", "--p", "3", "--l", "2", "--m", "1", "--window", "2", "--seed",
            "7", "--out", out,
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let argv = args(p.to_str().unwrap());
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(run(&argv).status.code(), Some(0));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let report: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["command"], "check main-diagram");
    assert!(!report["samples"].as_array().unwrap().is_empty());
}

#[test]
fn lemma_conv_check_passes() {
    let out = run(&["check", "lemma-conv", "--p", "2", "--m", "1", "--window", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn algebra_operations_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--case", "ramified", "--p", "3", "--l", "2", "--window", "2"];
    let with = |extra: &[&str]| -> Vec<String> { extra.iter().chain(base.iter()).map(|s| s.to_string()).collect() };
    let call = |argv: Vec<String>| run_json(&argv.iter().map(String::as_str).collect::<Vec<_>>());

    let tower = call(with(&["fields", "build"]));
    let labels = call(with(&["cosets", "enumerate", "--side", "F"]));
    let count = labels["result"]["count"].as_u64().unwrap();
    assert!(count > 0);
    let label = labels["result"]["labels"].as_array().unwrap().iter().find(|l| l["mu"] == json!([0, 1])).unwrap();
    let elem = json!({
        "side": {"name": "F", "ring": tower["result"]["F"], "level": 1, "n": 2},
        "l": 2, "k": 1,
        "terms": [{"label": label, "coeff": [1]}],
    });
    let path = write(dir.path(), "f.json", &elem);
    let square = call(with(&["hecke", "convolve", "--a", &path, "--b", &path]));
    assert_eq!(square["result"]["side"]["name"], "F");
    assert!(!square["result"]["terms"].as_array().unwrap().is_empty());

    let moved = call(with(&["kaz", "map", "--input", &path]));
    assert_eq!(moved["result"]["side"]["name"], "F'");
    let moved_path = write(dir.path(), "f2.json", &moved["result"]);
    let back = call(with(&["kaz", "map", "--inverse", "--input", &moved_path]));
    assert_eq!(back["result"], elem);

    // the unit of E is σ-fixed and restricts to the unit of F
    let e_label = json!({"mu": [0, 0], "P": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "Q": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "level": 2});
    let e_unit = json!({
        "side": {"name": "E", "ring": tower["result"]["E"], "level": 2, "n": 2},
        "l": 2, "k": 1,
        "terms": [{"label": e_label, "coeff": [1]}],
    });
    let e_path = write(dir.path(), "e.json", &e_unit);
    let fixed = call(with(&["hecke", "sigma", "--input", &e_path]));
    assert_eq!(fixed["result"], e_unit);
    let br = call(with(&["hecke", "brauer", "--input", &e_path]));
    assert_eq!(br["result"]["side"]["name"], "F");
    assert_eq!(br["result"]["terms"][0]["label"]["mu"], json!([0, 0]));
}

#[test]
fn tate_and_linkage_commands() {
    let dir = tempfile::tempdir().unwrap();
    let regular = json!({"l": 3, "k": 1, "dim": 3, "T": [[[0], [0], [1]], [[1], [0], [0]], [[0], [1], [0]]]});
    let path = write(dir.path(), "reg.json", &regular);
    for i in ["0", "1"] {
        let r = run_json(&["tate", "cohomology", "--module", &path, "--i", i]);
        assert_eq!(r["result"]["dim"], 0);
    }
    let trivial = json!({"l": 3, "k": 1, "dim": 1, "T": [[[1]]], "action": {"h": [[[2]]]}});
    let xi = write(dir.path(), "xi.json", &trivial);
    let r = run_json(&["tate", "cohomology", "--module", &xi, "--i", "1"]);
    assert_eq!(r["result"]["dim"], 1);

    let rho = write(dir.path(), "rho.json", &json!({"l": 3, "k": 1, "dim": 1, "T": [[[1]]], "action": {"b": [[[2]]]}}));
    let br = write(dir.path(), "br.json", &json!({"h": "b"}));
    let v = run_json(&["linkage", "check", "--xi", &xi, "--rho", &rho, "--br", &br]);
    assert_eq!(v["result"][0]["linked"], true);
    assert_eq!(v["result"][1]["linked"], true);
    assert_eq!(v["result"][0]["fieldDegree"], 1);

    let bad = write(dir.path(), "bad.json", &json!({"l": 3, "k": 1, "dim": 2, "T": [[[0], [1]], [[1], [0]]]}));
    let out = run(&["tate", "cohomology", "--module", &bad, "--i", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NOT_ORDER_L"));
}
