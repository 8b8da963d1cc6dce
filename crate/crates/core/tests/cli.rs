use std::process::{Command, Output};

use fracmks::invariant_subspace::MksParams;
use fracmks::mks_solution::{Solution, SolutionParams};
use fracmks::FractionalOrder;
use serde_json::Value;

fn fracmks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmks"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn ml_prints_value_and_method() {
    let o = fracmks(&["ml", "--alpha", "0.5", "--z", "-2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("alpha,beta,z,value,abs_error_estimate,method")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let v: f64 = row[3].parse().unwrap();
    // erfc(2) e^4
    assert!((v - 0.255_395_676_310_505_7).abs() < 1e-12, "{v}");
}

#[test]
fn single_point_at_half_lambda() {
    let o = fracmks(&[
        "solve", "--lambda", "0.5", "--alpha", "1", "--t", "1", "--x", "0",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "t,x,u\n1,0,2.0\n");
}

#[test]
fn fig1_preset_values() {
    let o = fracmks(&["solve", "--preset", "fig1"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 21 * 33);
    for r in &rows {
        let (t, x, u) = (r[0], r[1], r[2]);
        let s = 2f64.sqrt() * x;
        let exact = 2.0 / 3.0 * (1.0 - (-4.0 * t).exp()) + (-2.0 * t).exp() * (s.cos() + s.sin());
        // x is printed with 12 decimals, so allow for the rounded coordinate.
        assert!((u - exact).abs() < 1e-11, "t={t} x={x}: {u} vs {exact}");
        if t == 0.0 && x == 0.0 {
            assert_eq!(u, 1.0);
        }
    }
    let at = rows.iter().find(|r| r[0] == 1.0 && r[1] == 0.0).unwrap();
    assert_eq!(at[2], 0.789_791_523_977);
}

#[test]
fn json_round_trip_matches_library() {
    let o = fracmks(&[
        "solve",
        "--m",
        "4",
        "--alpha",
        "0.6",
        "--t",
        "0.5,1,2",
        "--x",
        "0,0.7,2.2",
        "--format",
        "json",
        "--precision",
        "17",
    ]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["params"]["c1_mode"], "paper");
    assert!(doc.get("report").is_none());

    let p = SolutionParams::new(
        MksParams::from_m(4.0).unwrap(),
        FractionalOrder::new(0.6).unwrap(),
    );
    let sol = Solution::paper(p);
    let ts: Vec<f64> = doc["grid"]["t"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let xs: Vec<f64> = doc["grid"]["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(ts, [0.5, 1.0, 2.0]);
    assert_eq!(xs, [0.0, 0.7, 2.2]);
    for (i, row) in doc["values"].as_array().unwrap().iter().enumerate() {
        for (j, v) in row.as_array().unwrap().iter().enumerate() {
            let exact = sol.evaluate(ts[i], xs[j]).unwrap();
            assert!((v.as_f64().unwrap() - exact).abs() <= 1e-16 * exact.abs().max(1.0) * 4.0);
        }
    }
}

#[test]
fn output_is_deterministic_and_can_go_to_file() {
    let args = ["solve", "--preset", "fig3", "--n-t", "8", "--n-x", "9"];
    let a = fracmks(&args);
    let b = fracmks(&args);
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let c = fracmks(&with_file);
    assert_eq!(code(&c), 0);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    assert!(!a.stdout.contains(&b'\r'));
}

#[test]
fn verify_reports_pass_and_fail() {
    let ok = fracmks(&["verify", "--lambda", "0.5", "--alpha", "0.5"]);
    assert_eq!(code(&ok), 0);
    let text = stdout(&ok);
    assert!(text.starts_with("max_abs_residual,argmax_t,argmax_x,tolerance,passed\n"));
    assert!(text.trim_end().ends_with(",true"));

    let bad = fracmks(&["verify", "--m", "3", "--alpha", "0.5", "--format", "json"]);
    assert_eq!(code(&bad), 3);
    let doc: Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(doc["report"]["passed"], false);
    assert!(doc["report"]["max_abs_residual"].as_f64().unwrap() > 1e-3);

    let quad = fracmks(&[
        "verify",
        "--m",
        "3",
        "--alpha",
        "0.5",
        "--c1-mode",
        "quadrature",
    ]);
    assert_eq!(code(&quad), 0);
}

#[test]
fn gap_matches_reference() {
    let o = fracmks(&["gap", "--alpha", "0.5", "--theta", "-2", "--t", "0.5,1"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert!((rows[0][1] - 0.142_362_545_050).abs() < 1e-12);
    assert!((rows[1][1] - 0.123_594_331_126).abs() < 1e-12);
}

#[test]
fn invariance_report() {
    let o = fracmks(&[
        "invariance",
        "--lambda",
        "0.3",
        "--trials",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["report"]["passed"], true);
    assert_eq!(doc["params"]["seed"], 42);

    let strict = fracmks(&[
        "invariance",
        "--lambda",
        "0.1",
        "--trials",
        "100",
        "--seed",
        "3",
        "--tol",
        "1e-20",
    ]);
    assert_eq!(code(&strict), 3);
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(code(&fracmks(&["invariance", "--lambda", "1.5"])), 2);
    assert_eq!(
        code(&fracmks(&[
            "solve", "--lambda", "0.5", "--m", "3", "--alpha", "1"
        ])),
        2
    );
    assert_eq!(code(&fracmks(&["solve", "--preset", "fig9"])), 2);
    assert_eq!(code(&fracmks(&["bogus"])), 2);
    let off_grid = fracmks(&[
        "solve",
        "--m",
        "3",
        "--alpha",
        "0.5",
        "--c1-mode",
        "quadrature",
        "--t",
        "1,0.3333",
    ]);
    assert_eq!(code(&off_grid), 1);
    assert!(!off_grid.stderr.is_empty());
}
