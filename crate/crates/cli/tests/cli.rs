use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;

use assert_cmd::Command;
use serde_json::Value;

const HALF_PI: &str = "1.5707963267948966";

fn widom() -> Command {
    Command::cargo_bin("widom").unwrap()
}

fn run_json(args: &[&str]) -> Value {
    let out = widom().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn value(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key} in {v}"))
}

fn c_closed_form(r: f64, alpha: f64) -> f64 {
    ((1.0 - r).abs() + (1.0 - 2.0 * r * alpha.cos() + r * r).sqrt()) / (2.0 * r * (alpha / 2.0).sin())
}

fn write_weight(dir: &tempfile::TempDir, name: &str, json: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn capacity_query() {
    let v = run_json(&["potential", "--alpha", HALF_PI, "--cap"]);
    assert_eq!(v["quantity"], "capacity");
    assert!((value(&v, "value") - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn capacity_accepts_degrees() {
    let v = run_json(&["potential", "--alpha-deg", "90", "--cap"]);
    assert!((value(&v, "value") - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn c_r_alpha_query() {
    let v = run_json(&["potential", "--alpha", HALF_PI, "--c-r", "2"]);
    assert_eq!(v["quantity"], "c_r_alpha");
    assert!((value(&v, "value") - c_closed_form(2.0, FRAC_PI_2)).abs() < 1e-12);
}

#[test]
fn green_query_matches_c_at_reciprocal() {
    let v = run_json(&["potential", "--alpha", HALF_PI, "--green", "0.5,0"]);
    assert!((value(&v, "value") - c_closed_form(2.0, FRAC_PI_2).ln()).abs() < 1e-12);
}

#[test]
fn log_integrals_of_constant_weight() {
    let dir = tempfile::tempdir().unwrap();
    let w = write_weight(&dir, "w.json", r#"{"const": 3.0}"#);
    let mu = run_json(&["potential", "--alpha", "1", "--mu-log-int", &w]);
    assert!((value(&mu, "value") - 3f64.ln()).abs() < 1e-10);
    let om = run_json(&["potential", "--alpha", "1", "--omega-log-int", &w, "--point", "0,0"]);
    assert!((value(&om, "value") - 3f64.ln()).abs() < 1e-10);
}

#[test]
fn solve_degree_zero_has_unit_norm() {
    let v = run_json(&["solve", "--alpha", "1", "--n", "0"]);
    assert!((value(&v["solution"], "norm") - 1.0).abs() < 1e-14);
    assert_eq!(v["solution"]["converged"], true);
}

#[test]
fn solve_degree_one_matches_closed_form() {
    // Best monic linear polynomial on the arc: sin α for α ≤ π/2.
    let v = run_json(&["solve", "--alpha", "1", "--n", "1"]);
    assert!((value(&v["solution"], "norm") - 1f64.sin()).abs() < 1e-10);
}

#[test]
fn solve_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.json");
    let summary = run_json(&[
        "solve",
        "--alpha-deg",
        "60",
        "--n",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    let full: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value(&summary, "norm"), value(&full["solution"], "norm"));
    assert_eq!(full["solution"]["degree"], 4);
    assert_eq!(full["solution"]["monomial_coefficients"].as_array().unwrap().len(), 5);
}

#[test]
fn solve_is_deterministic() {
    let args = ["solve", "--alpha", "2", "--n", "6", "--point", "0.3,-0.2"];
    let a = widom().args(args).output().unwrap().stdout;
    let b = widom().args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let unit = write_weight(&dir, "unit.json", r#"{"const": 1.0}"#);
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let summary = run_json(&[
        "sweep",
        "--alpha",
        "1.5708",
        "--weight",
        &unit,
        "--n",
        "8:16:8",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,grid,norm,widom,certificate,predicted,extrapolated")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "8");
    assert_eq!(rows[1][0], "16");
    for row in &rows {
        let w: f64 = row[3].parse().unwrap();
        assert!(w > 1.0 && w < 2.0, "widom {w}");
    }
    let lower = value(&summary, "lower_bound");
    for row in summary["rows"].as_array().unwrap() {
        assert!(value(row, "widom") >= lower - 1e-3);
        assert_eq!(row["flagged"], false);
    }
    let svg = fs::read_to_string(&svg).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("stroke-dasharray"));
}

#[test]
fn sweep_extrapolates_towards_limit() {
    let v = run_json(&["sweep", "--alpha", HALF_PI, "--n", "8:32:4", "--extrapolate"]);
    let limit = 2.0 * (PI / 8.0).cos().powi(2);
    assert!((value(&v, "extrapolated") - limit).abs() / limit < 0.02);
    assert!(value(&v, "fit_residual") <= 1e-2);
}

#[test]
fn sweep_rows_are_ordered_by_degree() {
    let v = run_json(&["sweep", "--alpha", "2", "--n", "2:12:1"]);
    let ns: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["n"].as_u64().unwrap())
        .collect();
    assert_eq!(ns, (2..=12).collect::<Vec<_>>());
}

#[test]
fn lemniscate_comparison_gap_is_small() {
    let v = run_json(&[
        "lemniscate",
        "--m",
        "2",
        "--r",
        "2",
        "--alpha",
        HALF_PI,
        "--l",
        "1",
        "--n",
        "6",
        "--compare",
    ]);
    assert_eq!(v["degree"], 13);
    assert!(value(&v, "gap") < 1e-8);
}

#[test]
fn lemniscate_prediction() {
    let v = run_json(&["predict", "--alpha", HALF_PI, "--lemniscate", "2,2,1"]);
    let expected = 2.0 * (PI / 8.0).cos().powi(2) * c_closed_form(2.0, FRAC_PI_2).sqrt();
    assert!((value(&v, "value") - expected).abs() < 1e-12);
}

#[test]
fn widom_prediction_for_unit_weight() {
    let v = run_json(&["predict", "--alpha", HALF_PI]);
    assert_eq!(v["kind"], "widom_limit");
    assert!((value(&v, "value") - 1.70710678).abs() < 1e-8);
    assert_eq!(value(&v, "lower_bound"), 1.0);
    assert_eq!(value(&v, "upper_bound"), 2.0);
}

#[test]
fn profile_prediction_lists_points() {
    let v = run_json(&[
        "predict",
        "--alpha",
        "2",
        "--point",
        "0,0",
        "--profile",
        "0.5,0.5",
        "--profile",
        "-2,0",
    ]);
    assert_eq!(v["profile"].as_array().unwrap().len(), 2);
}

#[test]
fn parse_errors_exit_2() {
    widom().args(["potential", "--alpha", "1"]).assert().code(2);
    widom().args(["solve", "--alpha", "x", "--n", "2"]).assert().code(2);
    widom().args(["sweep", "--alpha", "1", "--n", "9:3"]).assert().code(2);
    widom()
        .args(["solve", "--alpha", "1", "--n", "2", "--weight", "/nonexistent/w.json"])
        .assert()
        .code(2);
}

#[test]
fn invalid_weight_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let w = write_weight(&dir, "bad.json", r#"{"const": -1.0}"#);
    widom()
        .args(["solve", "--alpha", "1", "--n", "2", "--weight", &w])
        .assert()
        .code(2);
}

#[test]
fn domain_errors_exit_3() {
    widom().args(["potential", "--alpha", "4", "--cap"]).assert().code(3);
    widom().args(["potential", "--alpha", "0", "--cap"]).assert().code(3);
    // On the arc itself, 1/r is not in the domain.
    widom()
        .args(["potential", "--alpha", "1", "--green", "1,0"])
        .assert()
        .code(3);
}

#[test]
fn singular_weight_needs_flag() {
    let dir = tempfile::tempdir().unwrap();
    let w = write_weight(&dir, "sing.json", r#"{"powers": [{"re": 1.0, "im": 0.0, "s": -0.5}]}"#);
    // A pole on the arc without the flag is an invalid weight file.
    widom()
        .args(["predict", "--alpha", "1", "--weight", &w])
        .assert()
        .code(2);
    run_json(&["predict", "--alpha", "1", "--weight", &w, "--allow-singular"]);
}

#[test]
fn help_exits_0() {
    widom().arg("--help").assert().success();
}
