use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyslip"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn close(v: &Value, x: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - x).abs() <= tol
}

#[test]
#[allow(clippy::approx_constant)]
fn taylor_reports_reduced_set() {
    let v = json_of(&run(&["taylor", "--angles", "0,0.5236,2.618"]));
    assert_eq!(v["trivial"], false);
    assert_eq!(v["reduced"], serde_json::json!([0.0, 0.5236, 2.618]));
    let v = json_of(&run(&["taylor", "--angles", "0,90", "--degrees"]));
    assert_eq!(v["trivial"], true);
    assert_eq!(v["angle_unit"], "degrees");
    assert!(close(&v["reduced"][1], 90.0, 1e-12));
}

#[test]
fn mc_matches_analytic_value() {
    let v = json_of(&run(&["mc", "--k", "3", "--n", "100000", "--seed", "42"]));
    assert_eq!(v["analytic"], 0.5);
    let se = v["stderr"].as_f64().unwrap();
    assert!(close(&v["estimate"], 0.5, 3.0 * se));
}

#[test]
fn outputs_are_deterministic() {
    let bicrystal = data("bicrystal.json");
    let cases: [&[&str]; 3] = [
        &["mc", "--k", "5", "--n", "30000", "--seed", "7"],
        &[
            "lambda-plot",
            "--thetas",
            "0.3,2.5",
            "--grid",
            "50",
            "--csv",
        ],
        &[
            "outer",
            "--input",
            bicrystal.to_str().unwrap(),
            "--matrix",
            "1,0.2,0,1",
        ],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn shear_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("out.svg");
    let mesh = dir.path().join("mesh.json");
    let v = json_of(&run(&[
        "shear",
        "--gamma",
        "0.5",
        "--verify",
        "--svg",
        svg.to_str().unwrap(),
        "--mesh",
        mesh.to_str().unwrap(),
    ]));
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));
    assert_eq!(v["F"], serde_json::json!([[1.1, -0.2], [0.6, 0.8]]));
    assert_eq!(
        v["F_exact"],
        serde_json::json!([["11/10", "-1/5"], ["3/5", "4/5"]])
    );
    assert_eq!(v["conclusion"]["separates"], true);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let mesh: Value = serde_json::from_str(&std::fs::read_to_string(&mesh).unwrap()).unwrap();
    assert_eq!(mesh["cells"].as_array().unwrap().len(), 9);

    let v = json_of(&run(&["shear", "--gamma", "0"]));
    assert_eq!(v["conclusion"]["separates"], false);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["taylor", "--angles", "0,1"]), 0);
    // usage and parse problems
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["taylor"]), 2);
    assert_eq!(code(&["taylor", "--angles", "zero"]), 2);
    assert_eq!(
        code(&["compat", "--matrix", "1,0,0", "--s", "0", "--nu", "1"]),
        2
    );
    assert_eq!(code(&["shear", "--gamma", "half"]), 2);
    assert_eq!(
        code(&["outer", "--input", "/nonexistent/polycrystal.json"]),
        2
    );
    assert_eq!(code(&["mc", "--k", "3", "--json", "--csv"]), 2);
    // domain errors
    assert_eq!(code(&["shear", "--gamma", "9/10"]), 1);
    assert_eq!(code(&["lambda-plot", "--thetas", "0"]), 1);
    assert_eq!(
        code(&["compat", "--matrix", "2,0,0,2", "--s", "0", "--nu", "1"]),
        1
    );
    assert_eq!(code(&["mc", "--k", "0"]), 1);
    assert_eq!(
        code(&[
            "laminate",
            "--matrix",
            "2,0,0,0.5",
            "--s",
            "0",
            "--s-prime",
            "0"
        ]),
        1
    );
}

#[test]
fn bad_polycrystal_files() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    let status = run(&["outer", "--input", broken.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(2));

    // a single clockwise grain is rejected as geometry, not syntax
    let cw = dir.path().join("cw.json");
    let text = r#"{
      "domain": [{"kind": "arc", "center": [0, 0], "radius": 1, "from_angle": 0, "to_angle": 6.283185307179586, "ccw": false}],
      "grains": [{"id": 1, "theta": 0, "boundary": [{"kind": "arc", "center": [0, 0], "radius": 1, "from_angle": 0, "to_angle": 6.283185307179586, "ccw": false}]}]
    }"#;
    std::fs::write(&cw, text).unwrap();
    let status = run(&["outer", "--input", cw.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(1));
}

#[test]
fn outputs_match_schema() {
    let schema = validator();
    let bicrystal = data("bicrystal.json");
    let quadrants = data("quadrant_disk.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["taylor", "--angles", "0,0.5236,2.618"],
        vec!["member", "--matrix", "1,0.1,0,1", "--angles", "0,1.2"],
        vec!["compat", "--matrix", "1,3,0,1", "--s", "0", "--nu", "0.7"],
        vec!["compat", "--matrix", "2,0,0,0.5", "--s", "0", "--nu", "0"],
        vec![
            "laminate",
            "--matrix",
            "2,0,0,0.5",
            "--s",
            "0",
            "--s-prime",
            "1.2",
        ],
        vec!["outer", "--input", bicrystal.to_str().unwrap()],
        vec![
            "outer",
            "--input",
            quadrants.to_str().unwrap(),
            "--matrix",
            "2,0,0,0.5",
        ],
        vec!["mc", "--k", "4", "--n", "1000"],
        vec!["shear", "--gamma", "1/3", "--verify"],
        vec![
            "lambda-plot",
            "--thetas",
            "18,36,162",
            "--degrees",
            "--grid",
            "40",
        ],
    ];
    for args in cases {
        let v = json_of(&run(&args));
        let errors: Vec<String> = schema.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    // a tampered document is rejected
    let mut v = json_of(&run(&["mc", "--k", "2", "--n", "100"]));
    v["stderr"] = Value::from("n/a");
    assert!(!schema.is_valid(&v));
}

#[test]
fn outer_bound_membership() {
    let quadrants = data("quadrant_disk.json");
    let q = quadrants.to_str().unwrap();
    let v = json_of(&run(&["outer", "--input", q, "--matrix", "2,0,0,0.5"]));
    assert_eq!(v["equal_perp_full"], true);
    assert_eq!(v["membership"]["full"], false);
    assert_eq!(v["membership"]["perp"], false);
    let v = json_of(&run(&["outer", "--input", q, "--matrix", "0,-1,1,0"]));
    assert_eq!(v["membership"]["full"], true);

    let square = data("tilted_square.json");
    let v = json_of(&run(&["outer", "--input", square.to_str().unwrap()]));
    assert_eq!(v["perp_points"], serde_json::json!([]));
    assert_eq!(v["perp_bound"]["trivial"], true);
}

#[test]
fn lambda_plot_examples() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("lambda.svg");
    let v = json_of(&run(&[
        "lambda-plot",
        "--thetas",
        "0.3141592653589793,0.6283185307179586,2.827433388230814",
        "--grid",
        "100",
        "--svg",
        svg.to_str().unwrap(),
    ]));
    let regions = v["regions"].as_array().unwrap();
    assert_eq!(regions.len(), 3);
    let cells: Vec<u64> = regions
        .iter()
        .map(|r| r["filled_cells"].as_u64().unwrap())
        .collect();
    assert!(cells[1] < cells[0]);
    assert_eq!(
        std::fs::read_to_string(&svg)
            .unwrap()
            .matches("<polygon")
            .count(),
        3
    );

    let v = json_of(&run(&["lambda-plot", "--thetas", "90", "--degrees"]));
    assert_eq!(v["regions"][0]["degenerate"], true);
    assert!(close(&v["regions"][0]["gamma_at_one"][0], 0.0, 1e-12));

    let v = json_of(&run(&[
        "lambda-plot",
        "--thetas",
        "0.7853981633974483",
        "--grid",
        "100",
    ]));
    let r = &v["regions"][0];
    assert!(close(&r["beta_min"], 0.5f64.sqrt(), 1e-12));
    assert!(close(&r["gamma_at_one"][0], -2.0, 1e-12));
    assert!(close(&r["gamma_at_one"][1], 0.0, 1e-12));
}

#[test]
fn csv_output() {
    let out = run(&["lambda-plot", "--thetas", "0.5", "--grid", "10", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,beta,gamma_minus,gamma_plus"));
    assert_eq!(lines.count(), 11);

    let out = run(&["mc", "--k", "3", "--n", "1000", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "analytic,command,estimate,k,n,seed,stderr");
}

#[test]
fn degrees_and_radians_agree() {
    let a = json_of(&run(&[
        "compat", "--matrix", "1,3,0,1", "--s", "0", "--nu", "0.7",
    ]));
    let deg = 0.7f64.to_degrees().to_string();
    let b = json_of(&run(&[
        "compat",
        "--matrix",
        "1,3,0,1",
        "--s",
        "0",
        "--nu",
        &deg,
        "--degrees",
    ]));
    assert_eq!(a["compatible"], b["compatible"]);
    for i in 0..2 {
        let (x, y) = (a["nu"][i].as_f64().unwrap(), b["nu"][i].as_f64().unwrap());
        assert!((x - y).abs() < 1e-12);
    }
}
