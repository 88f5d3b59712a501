use std::process::{Command, Output};

use num_rational::BigRational;
use subpade::pade::pade_coefficients;

fn subpade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subpade")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn coeffs_round_trip_exact() {
    let o = subpade(&["coeffs", "-n", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let pair = pade_coefficients(5);
    let mut lines = text.lines();
    for (prefix, poly) in [("P: ", pair.p()), ("Q: ", pair.q())] {
        let line = lines.next().unwrap().strip_prefix(prefix).unwrap();
        let parsed: Vec<BigRational> = line.split(", ").map(|s| s.parse().unwrap()).collect();
        assert_eq!(parsed, poly.coeffs());
    }
}

#[test]
fn poles_first_order() {
    let o = subpade(&["poles", "-n", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let poles = v["poles"].as_array().unwrap();
    assert_eq!(poles.len(), 2);
    for p in poles {
        assert!((p[0].as_f64().unwrap() - 2.0).abs() < 1e-15);
        assert!((p[1].as_f64().unwrap().abs() - 2f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn approx_at_zero_returns_input() {
    let o = subpade(&["approx", "-n", "4", "-t", "0", "--eigenvalues", "1,0 0,3", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = 1.0 / 2f64.sqrt();
    for entry in v["results"][0]["result"].as_array().unwrap() {
        assert_eq!(entry[0].as_f64(), Some(w));
        assert_eq!(entry[1].as_f64(), Some(0.0));
    }
}

#[test]
fn laplace_exp1_value() {
    let o = subpade(&["laplace", "--pair", "exp1", "-n", "1", "-t", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value: f64 = text.lines().nth(1).unwrap().split_whitespace().nth(3).unwrap().parse().unwrap();
    assert!((value - 4.0 / 11.0).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(subpade(&["laplace", "-n", "1", "-t", "0"]).status.code(), Some(2));
    assert_eq!(subpade(&["coeffs"]).status.code(), Some(2));
    assert_eq!(subpade(&["laplace", "--pair", "nope", "-n", "1", "-t", "1"]).status.code(), Some(2));
    assert_eq!(subpade(&["verify", "--quick"]).status.code(), Some(0));
    let broken = subpade(&["verify", "--quick", "--perturb-coefficient", "1:-0.1"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stdout(&broken).contains("FAIL"));
}

#[test]
fn study_is_deterministic() {
    let args = ["--seed", "3", "study", "--instance", "random", "--n-max", "12"];
    let a = subpade(&args);
    let b = subpade(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("n,t,alpha,regime,empirical_error,bound,valid"));
}

#[test]
fn config_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["study", "--instance", "contraction", "--n-max", "8", "--regime", "h-infinity", "--alpha", "2"];
    let emitted = subpade(&[&["--emit-config"], &args[..]].concat());
    assert!(emitted.status.success(), "{}", String::from_utf8_lossy(&emitted.stderr));
    let path = dir.path().join("run.json");
    std::fs::write(&path, &emitted.stdout).unwrap();
    let direct = subpade(&args);
    let from_file = subpade(&["--config", path.to_str().unwrap(), "study", "--instance", "contraction"]);
    assert!(direct.status.success());
    assert_eq!(direct.stdout, from_file.stdout);
}

#[test]
fn matrix_and_vector_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("a.txt");
    let v = dir.path().join("x.txt");
    std::fs::write(&m, "# upper triangular\ncomplex-matrix 2 2\n1,0 1,0\n0,0 2,0\n").unwrap();
    std::fs::write(&v, "complex-vector 2\n0,0 1,0\n").unwrap();
    let o = subpade(&[
        "approx", "-n", "8", "-t", "1", "--matrix", m.to_str().unwrap(), "--vector", v.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = subpade::operators::parse_vector(&stdout(&o)).unwrap();
    // exp(-A) e2 = ((e^-2 - e^-1), e^-2)
    let (e1, e2) = ((-1f64).exp(), (-2f64).exp());
    assert!((out[0].re - (e2 - e1)).abs() < 1e-9);
    assert!((out[1].re - e2).abs() < 1e-9);

    std::fs::write(&v, "complex-vector 3\n0,0 1,0 0,0\n").unwrap();
    let o = subpade(&["approx", "-n", "2", "-t", "1", "--matrix", m.to_str().unwrap(), "--vector", v.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
