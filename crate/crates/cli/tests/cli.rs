use std::process::{Command, Output};

use serde_json::Value;

fn bargmann(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bargmann"))
        .args(args)
        .env_remove("BARGMANN_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const MUB: &str = r#"{"dim":2,"states":[[[1,0],[0,0]],[[0.7071067811865476,0],[0.7071067811865476,0]],[[0.7071067811865476,0],[0,0.7071067811865476]]]}"#;

#[test]
fn invariant_reports_imaginarity() {
    let out = bargmann(&["invariant", MUB]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"][0], 0.25);
    assert_eq!(v["value"][1], 0.25);
    assert_eq!(v["verdict"], "basis-independent imaginary");

    let real = r#"{"dim":2,"states":[[[1,0],[0,0]],[[0.6,0],[0.8,0]]]}"#;
    let v = json(&bargmann(&["invariant", real]));
    assert_eq!(v["imaginary"], false);
}

#[test]
fn invariant_rejects_bad_input() {
    let out = bargmann(&["invariant", r#"{"dim":2,"states":[[[1,0],[1,0]]]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = bargmann(&["invariant", "/nonexistent/tuple.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_from_environment() {
    let nearly_real = r#"{"dim":2,"states":[[[1,0],[0,0]],[[0.6,0],[0.8,0]],[[0.6,0.0001],[0.7999999937500001,0]]]}"#;
    let out = bargmann(&["invariant", nearly_real]);
    assert_eq!(json(&out)["imaginary"], true);
    let out = Command::new(env!("CARGO_BIN_EXE_bargmann"))
        .args(["invariant", nearly_real])
        .env("BARGMANN_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(json(&out)["imaginary"], false);
    let out = bargmann(&["--tol", "1e-3", "invariant", nearly_real]);
    assert_eq!(json(&out)["imaginary"], false);
}

#[test]
fn region_member_verdicts() {
    let out = bargmann(&[
        "region", "member", "--n", "4", "--z", "-0.25,0", "--method", "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["member"], true);
    assert_eq!(v["polygon"]["boundary"], true);
    assert_eq!(v["agree"], true);

    let out = bargmann(&[
        "region",
        "member",
        "--n",
        "3",
        "--z",
        "0,0.3",
        "--method",
        "feasibility",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["feasibility"]["member"], false);

    let out = bargmann(&["region", "member", "--n", "2", "--z", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn region_window_and_maximag() {
    let v = json(&bargmann(&["region", "window", "--n", "3"]));
    assert_eq!(v["lo"], -0.125);
    assert_eq!(v["hi"], 1.0);
    let v = json(&bargmann(&["region", "maximag", "--n", "3"]));
    assert_eq!(v["i_n"], 0.25);
}

#[test]
fn region_boundary_csv() {
    let out = bargmann(&["region", "boundary", "--n", "4", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,t,re(z1),im(z1),re(value),im(value),r,phi");
    assert_eq!(lines.len(), 6);
    let mid: Vec<f64> = lines[3].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(mid[1], 0.5);
    assert!((mid[4] + 0.25).abs() < 1e-12);
    assert_eq!(
        bargmann(&["region", "boundary", "--n", "4", "--samples", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn synth_plans_round_trip_through_invariant() {
    let out = bargmann(&["synth", "realize", "--n", "4", "--z", "-0.1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let plan = json(&out);
    assert_eq!(plan["plan"]["method"], "scaled");
    let tuple = serde_json::json!({ "dim": plan["dim"], "states": plan["states"] }).to_string();
    let v = json(&bargmann(&["invariant", &tuple]));
    assert!((v["value"][0].as_f64().unwrap() + 0.1).abs() < 1e-8);

    let out = bargmann(&["synth", "realize", "--n", "3", "--z", "0,0.3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bargmann(&["synth", "real", "--n", "4", "--c", "-0.25"]);
    assert_eq!(json(&out)["plan"]["method"], "real_angles");
    assert_eq!(
        bargmann(&["synth", "real", "--n", "3", "--c", "-0.2"])
            .status
            .code(),
        Some(1)
    );
    let out = bargmann(&["synth", "disk", "--z", "0.9,0"]);
    assert_eq!(json(&out)["plan"]["aux"]["n"], 47);
    assert_eq!(
        bargmann(&["synth", "disk", "--z", "0,1"]).status.code(),
        Some(1)
    );
}

#[test]
fn gram_check_and_realize() {
    let psd = r#"{"n":2,"entries":[[[1,0],[0.5,0]],[[0.5,0],[1,0]]]}"#;
    let v = json(&bargmann(&["gram", "check", psd]));
    assert_eq!(v["psd"], true);
    assert_eq!(v["rank"], 2);
    let out = bargmann(&["gram", "realize", psd]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["states"].as_array().unwrap().len(), 2);

    let not_psd = r#"{"n":2,"entries":[[[1,0],[2,0]],[[2,0],[1,0]]]}"#;
    assert_eq!(bargmann(&["gram", "check", not_psd]).status.code(), Some(1));
    assert_eq!(
        bargmann(&["gram", "realize", not_psd]).status.code(),
        Some(1)
    );
    let not_hermitian = r#"{"n":2,"entries":[[[1,0],[2,0]],[[1,0],[1,0]]]}"#;
    assert_eq!(
        bargmann(&["gram", "check", not_hermitian]).status.code(),
        Some(2)
    );
}

#[test]
fn harness_is_reproducible() {
    let args = [
        "harness",
        "run",
        "--property",
        "prop2",
        "--trials",
        "500",
        "--seed",
        "7",
        "--n",
        "5",
        "--d",
        "3",
    ];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = bargmann(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = bargmann(&args);
    assert_eq!(strip(json(&a)), strip(json(&b)));
    let v = json(&a);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["property_id"], "prop2");
    assert_eq!(
        bargmann(&[
            "harness",
            "run",
            "--property",
            "bogus",
            "--trials",
            "1",
            "--seed",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("bargmann-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("window.json");
    let out = bargmann(&["region", "window", "--n", "4", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lo"], -0.25);
    std::fs::remove_dir_all(&dir).unwrap();
}
