use std::process::{Command, Output};

use serde_json::Value;

const GRID: &str = "x0^3*y0^3 + 2*x0^3*y1^3 + x1^3*y0^3 - x1^3*y1^3";
const FERMAT: &str = "x0^3*y0^3 + x1^3*y1^3";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridtorsion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert_eq!(doc["schema"], 1);
    (out.status.code().unwrap(), doc)
}

#[test]
fn analyze_grid_curve() {
    let (code, doc) = json(&["analyze", "--curve", GRID]);
    assert_eq!(code, 0);
    assert_eq!(doc["grid"]["is_grid"], true);
    assert_eq!(doc["grid"]["rank"], 2);
    assert_eq!(doc["torsion"]["order"], 3);
    assert!(doc["curve"]["form"]["coeffs"][0][0].is_string());
}

#[test]
fn analyze_fermat_reports_witnesses() {
    let (code, doc) = json(&["analyze", "--curve", FERMAT]);
    assert_eq!(code, 3);
    let ws = doc["curve"]["smoothness"]["witnesses"].as_array().unwrap();
    let mut pts: Vec<(String, String)> = ws
        .iter()
        .map(|w| {
            (
                w["x"].as_str().unwrap().into(),
                w["y"].as_str().unwrap().into(),
            )
        })
        .collect();
    pts.sort();
    assert_eq!(
        pts,
        vec![
            ("[0:1]".into(), "[1:0]".into()),
            ("[1:0]".into(), "[0:1]".into())
        ]
    );
}

#[test]
fn parse_errors_are_structured() {
    let (code, doc) = json(&["grid-test", "--curve", "x0^2*y0 + x0*y0"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "not_bihomogeneous");
    let (code, doc) = json(&["grid-test", "--curve", "x0^3*y0^3 + *"]);
    assert_eq!(code, 2);
    assert!(doc["error"]["message"].is_string());
}

#[test]
fn curve_from_file() {
    let path = std::env::temp_dir().join(format!("gridtorsion-cli-{}.txt", std::process::id()));
    std::fs::write(&path, GRID).unwrap();
    let arg = format!("@{}", path.display());
    let (code, doc) = json(&["torsion", "--curve", &arg, "--nmax", "5"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(doc["torsion"]["order"], 3);
}

#[test]
fn grilled_needs_torsion() {
    let curve = format!("{GRID} + x0*x1^2*y0^2*y1");
    let (code, doc) = json(&["grilled", "--curve", &curve, "--n", "4"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "no_torsion_section");
    assert_eq!(doc["error"]["tried"], serde_json::json!([3, 4]));
    let (code, doc) = json(&["grilled", "--curve", GRID, "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["grilled"]["is_grilled"], true);
}

#[test]
fn sigma_family_member() {
    let (code, doc) = json(&[
        "--field",
        "Q(z5)",
        "sigma-family",
        "--alpha",
        "-1",
        "--beta",
        "1",
        "--gamma",
        "1",
        "--grilled",
        "5",
    ]);
    assert_eq!(code, 0, "{doc}");
    let text = doc.to_string();
    assert!(text.contains("\"is_grilled\":false"), "{text}");
    assert!(text.contains("\"order\":5"), "{text}");
}

#[test]
fn symprod_table() {
    let (code, doc) = json(&["symprod", "--k", "3"]);
    assert_eq!(code, 0);
    let t = &doc["table"];
    assert_eq!(
        (
            t["k_squared"].as_i64(),
            t["k_dot_delta"].as_i64(),
            t["delta_squared"].as_i64()
        ),
        (Some(21), Some(18), Some(-12))
    );
    let out = run(&["--text", "symprod", "--k", "3"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("K^2 = 21"));
    let (code, _) = json(&["symprod", "--k", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn secant_and_survey() {
    let (code, doc) = json(&["secant-rank", "--k", "4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["rank"], 16);
    let out = run(&[
        "survey-fp",
        "--k",
        "3",
        "--p",
        "7",
        "--trials",
        "10",
        "--grid",
        "--csv",
    ]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("outcome,count\n"));
    let (code, doc) = json(&["survey-fp", "--k", "3", "--p", "5"]);
    assert_eq!(code, 2);
    assert!(doc["error"].is_object());
}

#[test]
fn sample_grid_is_deterministic() {
    let a = run(&[
        "--json",
        "sample-grid",
        "--k",
        "3",
        "--count",
        "2",
        "--seed",
        "4",
    ]);
    let b = run(&[
        "--json",
        "sample-grid",
        "--k",
        "3",
        "--count",
        "2",
        "--seed",
        "4",
    ]);
    assert_eq!(a.stdout, b.stdout);
}
