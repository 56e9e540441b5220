use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracspline"))
        .args(args)
        .env_remove("FRACSPLINE_TOL_SCALE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<f64>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[test]
fn eval_integer_order() {
    let o = run(&["eval", "--z", "2", "--grid", "0:4:0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("x,re,im,accuracy_loss\n"));
    let r = rows(&o);
    assert_eq!(r.len(), 9);
    let at_one = r.iter().find(|r| r[0] == 1.0).unwrap();
    assert!((at_one[1] - 1.0).abs() < 1e-12);
    assert_eq!(at_one[2], 0.0);
}

#[test]
fn eval_vanishes_left_of_support() {
    let o = run(&["eval", "--z", "2.5+1i", "--grid", "-1:0:0.5"]);
    assert_eq!(o.status.code(), Some(0));
    for r in rows(&o) {
        assert_eq!((r[1], r[2]), (0.0, 0.0));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["eval", "--z", "2.5 +i", "--grid", "0:1:0.5"][..],
        &["eval", "--z", "abc", "--grid", "0:1:0.5"],
        &["eval", "--z", "0.5", "--grid", "0:1:0.5"],
        &["eval", "--z", "2", "--grid", "0:1"],
        &["dirichlet", "--weights", "1,-1", "--knots", "0,1"],
        &["dirichlet", "--weights", "1,1", "--knots", "0,1", "--samples", "10"],
        &["fracop", "--z", "0.5", "--op", "integral", "--function", "nope", "--grid", "0:1:0.5"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn spectrum_rows() {
    let o = run(&["spectrum", "--z", "2+1i", "--grid", "0:20:0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(&r[0][..7], &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
    for row in &r[1..] {
        // modulus part times phase part times damping
        let modulus = fracspline::C64::new(row[5], row[6]);
        let phase = fracspline::C64::new(row[7], row[8]);
        let p = modulus * phase * row[9];
        assert!((p - fracspline::C64::new(row[1], row[2])).norm() <= 1e-12 * row[3].max(1e-300));
    }
    let two_pi = std::f64::consts::TAU;
    let grid = format!("{two_pi}:{}:{two_pi}", 2.0 * two_pi);
    let o = run(&["spectrum", "--z", "3", "--grid", &grid]);
    let r = rows(&o);
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|r| r[3] <= 1e-12));
}

#[test]
fn fracop_on_the_exponential() {
    let o = run(&["fracop", "--z", "0.5+0.5i", "--op", "integral", "--grid", "0:3:1"]);
    assert_eq!(o.status.code(), Some(0));
    for r in rows(&o) {
        assert!((r[1] - (-r[0]).exp()).abs() < 1e-9);
        assert!(r[2].abs() < 1e-9);
    }
}

#[test]
fn dirichlet_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["dirichlet", "--weights", "1.5,1,1.5", "--knots", "0,1,2", "--samples", "20000", "--seed", "3", "-o", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("x,density\n"));
}

#[test]
fn json_format() {
    let o = run(&["eval", "--z", "2.5", "--grid", "0:1:0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_array() || v.is_object());
}

#[test]
fn verify_and_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bspline.json");
    let o = run(&["verify", "--suite", "bspline", "--seed", "7", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let list = reports.as_array().unwrap();
    assert!(!list.is_empty());
    for r in list {
        for key in ["identity_id", "parameters", "discrepancy", "tolerance", "mc_stderr", "passed", "notes"] {
            assert!(r.get(key).is_some(), "{key} missing");
        }
    }
    let o = run(&["report", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), list.len());
    assert!(!out.contains("FAIL"));
}

#[test]
fn corrupted_tolerance_fails_verification() {
    let o = Command::new(env!("CARGO_BIN_EXE_fracspline"))
        .args(["verify", "--suite", "bspline", "--seed", "7"])
        .env("FRACSPLINE_TOL_SCALE", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dirichlet_verification_is_reproducible() {
    let a = run(&["verify", "--suite", "dirichlet", "--seed", "7"]);
    let b = run(&["verify", "--suite", "dirichlet", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
