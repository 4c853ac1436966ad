use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heiscount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("heiscount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn field_info_reports_constants() {
    let o = run(&["field-info", "--D", "-4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "heiscount/v1");
    let c = v["constants"]["mertens_C"].as_f64().unwrap();
    assert!((c - 8.0 / std::f64::consts::PI.powi(4)).abs() < 1e-12);
    let o = run(&["field-info", "--D", "-3"]);
    assert_eq!(json(&o)["pi_index"], 1);
}

#[test]
fn non_fundamental_discriminant_is_invalid_input() {
    let o = run(&["field-info", "--D", "-12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("-12"));
}

#[test]
fn mertens_csv_is_fixed_and_deterministic() {
    let o = run(&["mertens", "--D", "-4", "--s", "1,20,60"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,count,ratio"));
    assert!(lines.next().unwrap().starts_with("1,4,"));
    let again = run(&["--workers", "2", "mertens", "--D", "-4", "--s", "1,20,60"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn mertens_accepts_an_ideal() {
    let hnf = run(&["mertens", "--D", "-4", "--s", "30", "--m", "2,1,1"]);
    let gens = run(&["mertens", "--D", "-4", "--s", "30", "--m", "1,1,2,0"]);
    assert_eq!(hnf.status.code(), Some(0));
    assert_eq!(stdout(&hnf), stdout(&gens));
    assert_eq!(
        run(&["mertens", "--D", "-4", "--s", "30", "--m", "1,2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn equidist_grid_rows() {
    let o = run(&[
        "equidist",
        "--D",
        "-4",
        "--s",
        "50",
        "--window",
        "-1,1,-1,1,-1,1",
        "--grid",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.starts_with("re_w_lo,re_w_hi,im_w_lo,im_w_hi,im_w0_lo,im_w0_hi,count,mass,volume\n")
    );
    assert_eq!(text.lines().count(), 1 + 8);
    let bad = run(&[
        "equidist",
        "--D",
        "-4",
        "--s",
        "50",
        "--window",
        "1,0,0,1,0,1",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn chains_report_and_geometry() {
    let geom = scratch("geometry.json");
    let o = run(&[
        "chains",
        "--D",
        "-4",
        "--eps",
        "1,0.5",
        "--format",
        "json",
        "--emit-geometry",
        geom.to_str().unwrap(),
        "--samples",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "heiscount/v1");
    assert!(v["report"]["slope"].is_number());
    assert!(v["report"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["saturated"].is_boolean()));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&geom).unwrap()).unwrap();
    assert_eq!(g["schema"], "heiscount/v1");
    let chains = g["chains"].as_array().unwrap();
    assert!(!chains.is_empty());
    for c in chains {
        assert_eq!(c["samples"].as_array().unwrap().len(), 16);
        assert_eq!(c["polar"].as_array().unwrap().len(), 3);
        assert!(c["center"].as_array().unwrap().len() == 3);
    }
}

#[test]
fn chains_csv_header() {
    let o = run(&["chains", "--D", "-4", "--eps", "0.5"]);
    assert!(stdout(&o).starts_with("eps,count,saturated,ratio\n"));
}

#[test]
fn verify_suites() {
    assert_eq!(
        run(&["verify", "--metrics", "--pairs", "500"])
            .status
            .code(),
        Some(0)
    );
    let g = run(&["verify", "--group"]);
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(json(&g)["pass"], true);
    // The closed form the μ-integral is checked against is off by (2n−1)/2,
    // so this suite reports a failure.
    let i = run(&["verify", "--integrals"]);
    assert_eq!(i.status.code(), Some(1));
    let v = json(&i);
    let checks = v["checks"].as_array().unwrap();
    let by_name = |n: &str| checks.iter().find(|c| c["check"] == n).unwrap()["pass"].clone();
    assert_eq!(by_name("cprime_2"), true);
    assert_eq!(by_name("jacobian_F"), true);
    assert_eq!(by_name("mu_integral_n2"), false);
}

#[test]
fn cubic_default_seed_and_rejection() {
    let o = run(&["cubic", "--D", "-4", "--s", "1,1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["report"]["ln_lambda"].as_f64().unwrap() > 0.0);
    assert!(v["report"]["slope"].is_number());

    let gamma = scratch("unipotent.json");
    // The Heisenberg translation (1, 1 + i).
    std::fs::write(
        &gamma,
        r#"{"disc": -4, "matrix": [[[1,0],[1,-1],[1,0]],[[0,0],[1,0],[1,1]],[[0,0],[0,0],[1,0]]]}"#,
    )
    .unwrap();
    let o = run(&[
        "cubic",
        "--D",
        "-4",
        "--s",
        "2",
        "--gamma",
        gamma.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not loxodromic"));
}

#[test]
fn missing_arguments_exit_two() {
    assert_eq!(run(&["mertens", "--D", "-4"]).status.code(), Some(2));
}
