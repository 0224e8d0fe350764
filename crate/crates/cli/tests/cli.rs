use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn majid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majid"))
        .args(args)
        .env_remove("MAJID_BUDGET")
        .env_remove("MAJID_SEED")
        .env_remove("MAJID_JOBS")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = majid(args);
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn cocycle_check_and_classify() {
    let spec = path("z2cubed_a123.json");
    let (code, v) = run(&["cocycle", "check", "--spec", &spec]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["is_cocycle"], true);

    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    let out = majid(&["cocycle", "tabulate", "--spec", &spec]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    std::fs::write(&table, v["result"]["cochain"].to_string()).unwrap();
    let (code, v) = run(&["cocycle", "classify", "--cochain", table.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["spec"]["a_rst"]["1,2,3"], 1);

    let (code, v) = run(&["cocycle", "is-coboundary", "--spec", &spec]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["coboundary"], false);
}

#[test]
fn cocycle_eval_and_absorb() {
    let spec = path("z2xz4_abelian.json");
    let (code, v) = run(&[
        "cocycle", "eval", "--spec", &spec, "--x", "1,0", "--y", "1,0", "--z", "1,0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        v["result"]["value"],
        serde_json::json!({"num": 1, "den": 2})
    );
    let (code, v) = run(&[
        "--seed", "7", "cocycle", "absorb", "--spec", &spec, "--count", "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["absorbed"], true);
    assert_eq!(v["input"]["seed"], 7);
}

#[test]
fn broken_table_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    let mut values = vec![r#"{"num":0,"den":1}"#; 8];
    values[7] = r#"{"num":1,"den":3}"#;
    std::fs::write(
        &f,
        format!(r#"{{"moduli":[2],"values":[{}]}}"#, values.join(",")),
    )
    .unwrap();
    let p = f.to_str().unwrap();
    let (code, v) = run(&["cocycle", "check", "--cochain", p]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["counterexample"]["condition"], "cocycle");
    let out = majid(&["cocycle", "classify", "--cochain", p]);
    assert_eq!(out.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "precondition");
}

#[test]
fn double_resolve_dichotomy() {
    let na = path("z2cubed_a123.json");
    let (code, v) = run(&["double", "check", "--spec", &na]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["abelian"], false);
    assert_eq!(v["result"]["abelian_bruteforce"], false);
    assert_eq!(v["result"]["axioms_hold"], true);

    let (code, v) = run(&["resolve", "verify", "--spec", &na]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["obstruction"]["confirmed"], true);
    assert_eq!(
        v["result"]["obstruction"]["f_rst"]["1,2,3"],
        serde_json::json!({"num": 1, "den": 2})
    );

    let (code, v) = run(&["resolve", "verify", "--spec", &path("z2xz4_abelian.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["resolved"], true);
}

#[test]
fn rootdatum_commands() {
    let a2 = path("datum_a2.json");
    let (code, v) = run(&["rootdatum", "verify", "--datum", &a2, "--require-connected"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pass"], true);
    let (code, v) = run(&["rootdatum", "determine-a", "--datum", &a2]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["a"]["a_l"], serde_json::json!([1, 1]));
    let (code, v) = run(&["rootdatum", "yd", "--datum", &a2]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["roundtrip"], true);
    assert_eq!(v["result"]["support_group"]["is_full"], true);

    let (code, v) = run(&[
        "rootdatum",
        "verify",
        "--datum",
        &path("datum_redundant.json"),
    ]);
    assert_eq!(code, 0, "{v}");
    let (code, v) = run(&[
        "rootdatum",
        "verify",
        "--datum",
        &path("datum_descent_fails.json"),
    ]);
    assert_eq!(code, 1);
    let failed: Vec<&str> = v["result"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["descent"]);
}

#[test]
fn construct_commands() {
    let (code, v) = run(&["construct", "cartan", "--matrix", &path("cartan_a2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["genuine"], true);
    assert_eq!(
        v["result"]["datum"]["diagram"]["q_tilde"]["1,2"],
        serde_json::json!({"num": 8, "den": 9})
    );
    let (code, v) = run(&[
        "construct",
        "cartan",
        "--matrix",
        &path("cartan_b2.json"),
        "--orders",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["datum"]["moduli"], serde_json::json!([5, 5]));
    let (code, _) = run(&[
        "construct",
        "cartan",
        "--matrix",
        &path("cartan_g2.json"),
        "--orders",
        "3",
    ]);
    assert_eq!(code, 4);

    let (code, v) = run(&[
        "construct",
        "standard",
        "--diagram",
        &path("standard_q9.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["m"], 3);
    let (code, v) = run(&[
        "construct",
        "standard",
        "--diagram",
        &path("standard_q6.json"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["outcome"], "refused");
}

#[test]
fn exit_codes_for_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let typo = dir.path().join("typo.json");
    std::fs::write(
        &typo,
        r#"{"moduli":[2],"a_l":[1],"a_ij":{},"a_rst":{},"a_lll":[]}"#,
    )
    .unwrap();
    let spec = path("z2cubed_a123.json");

    assert_eq!(
        majid(&["cocycle", "check", "--spec", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        majid(&["cocycle", "check", "--spec", typo.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(majid(&["cocycle", "frobnicate"]).status.code(), Some(2));
    assert_eq!(
        majid(&["--budget", "100", "cocycle", "check", "--spec", &spec])
            .status
            .code(),
        Some(3)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        majid(&["cocycle", "check", "--spec", missing.to_str().unwrap()])
            .status
            .code(),
        Some(5)
    );
    let nowrite = dir.path().join("no/such/dir/out.json");
    let out = majid(&[
        "--json",
        nowrite.to_str().unwrap(),
        "cocycle",
        "check",
        "--spec",
        &spec,
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_majid"))
        .args(["cocycle", "check", "--spec", &path("z2cubed_a123.json")])
        .env("MAJID_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("out.json");
    let args = [
        "--jobs",
        "2",
        "--json",
        file.to_str().unwrap(),
        "double",
        "check",
        "--spec",
    ];
    let spec = path("z2cubed_a123.json");
    let mut full: Vec<&str> = args.to_vec();
    full.push(&spec);
    let a = majid(&full);
    let written = std::fs::read(&file).unwrap();
    let b = majid(&["double", "check", "--spec", &spec]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, written);
}
