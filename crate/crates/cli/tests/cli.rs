use std::process::{Command, Output};

use serde_json::Value;

fn lsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsl"))
        .args(args)
        .env("LSL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn verify_one_surface_passes() {
    let out = lsl(&[
        "verify",
        "--surface",
        "product",
        "--c",
        "-1",
        "--param",
        "j=3",
        "--param",
        "r=0.7",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["pass"], true);
    let surfaces = doc["surfaces"].as_array().unwrap();
    assert_eq!(surfaces.len(), 1);
    assert_eq!(surfaces[0]["fit"]["verdict"], "TwoType");
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
}

#[test]
fn space_form_filter_restricts_the_catalog() {
    let doc = stdout_json(&lsl(&["fit", "--c", "-1"]));
    let surfaces = doc["surfaces"].as_array().unwrap();
    assert!(!surfaces.is_empty());
    for s in surfaces {
        assert_eq!(s["geometry_summary"]["space_form"], "AntiDeSitter");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&lsl(&["verify", "--surface", "torus"])), 2);
    assert_eq!(code(&lsl(&["frobnicate"])), 2);
    assert_eq!(code(&lsl(&["verify", "--grid", "2x8"])), 2);
    assert_eq!(code(&lsl(&["verify", "--param", "tau=1"])), 2);
    assert_eq!(
        code(&lsl(&["scan", "--surface", "umbilical", "--param", "tau=1:0:0.5"])),
        2
    );
    assert_eq!(code(&lsl(&["verify", "--surface", "b-scroll", "--param", "a0=0"])), 3);
    assert_eq!(code(&lsl(&["verify", "--surface", "complex-circle", "--c", "+1"])), 3);
    // an impossible tolerance makes a check fail
    let out = lsl(&["verify", "--surface", "umbilical", "--tol", "identity=1e-300"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed:"));
}

#[test]
fn tolerance_overrides() {
    let out = lsl(&["fit", "--surface", "umbilical", "--tol", "expected=1e-3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["tolerances"]["expected"], 1e-3);
    assert_eq!(code(&lsl(&["fit", "--tol", "nonsense=1"])), 2);
    assert_eq!(code(&lsl(&["fit", "--tol", "identity"])), 2);
}

#[test]
fn report_goes_to_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = lsl(&["fit", "--surface", "complex-circle", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("ComplexPair"), "{summary}");
    assert!(summary.contains("sigma ="));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["surfaces"][0]["fit"]["verdict"], "ComplexPair");
}

#[test]
fn reports_are_deterministic() {
    let strip = |o: Output| -> String {
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("\"generated_at\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let args = [
        "verify",
        "--surface",
        "b-scroll",
        "--param",
        "kappa=poly:1,0,0.25",
        "--seed",
        "7",
    ];
    assert_eq!(strip(lsl(&args)), strip(lsl(&args)));
}

#[test]
fn scan_writes_csv() {
    let out = lsl(&[
        "scan",
        "--surface",
        "umbilical",
        "--param",
        "a=1,0,0,0",
        "--param",
        "a4=0.9:1.1:0.1",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "a4,H,H2,K,sigma,pi,verdict,max_residual,tan_residual");
    assert_eq!(lines.len(), 4);
    let verdicts: Vec<_> = lines[1..].iter().map(|l| l.split(',').nth(6).unwrap()).collect();
    assert_eq!(verdicts, ["OneType", "InfiniteType", "OneType"]);
}

#[test]
fn scan_reports_failing_values_as_rows() {
    let out = lsl(&["scan", "--surface", "b-scroll", "--param", "a0=-1:1:1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].contains("error"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("a0 = 0"));
}

#[test]
fn catalog_lists_and_describes() {
    let list = stdout_json(&lsl(&["catalog"]));
    let names: Vec<_> = list
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(
        names,
        [
            "umbilical",
            "product",
            "complex-circle",
            "b-scroll",
            "generic-perturbed"
        ]
    );
    let desc = stdout_json(&lsl(&["catalog", "--surface", "complex-circle"]));
    assert_eq!(desc["space_form"], "AntiDeSitter");
    assert_eq!(desc["expected"]["verdict"], "ComplexPair");
}
