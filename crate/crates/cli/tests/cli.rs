use std::process::{Command, Output};

use nws_core::solutions::fixtures;
use serde_json::Value;

fn nws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nws")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn body(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn criterion_examples() {
    let o = nws(&["criterion", "--a", "1", "--b", "0", "--c", "exp(t)", "--t", "0:2"]);
    assert_eq!(code(&o), 0);
    let v = body(&o);
    assert_eq!(v["reducible"], true);
    assert!((v["lambda"].as_f64().unwrap() - 0.5).abs() < 1e-10);

    let o = nws(&["criterion", "--a", "1", "--b", "t", "--c", "1", "--t", "0:2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(body(&o)["reducible"], false);

    let o = nws(&["criterion", "--a", "exp(t)", "--b", "2*exp(2*t)", "--c", "3*exp(2*t)", "--lambda", "2"]);
    assert_eq!(code(&o), 0);
    let o = nws(&["criterion", "--a", "exp(t)", "--b", "2*exp(2*t)", "--c", "3*exp(2*t)", "--lambda", "-2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn classify_example() {
    let o = nws(&["classify", "--c", "3*(2*t+1)^2", "--t", "0:5"]);
    assert_eq!(code(&o), 0);
    let v = body(&o);
    assert_eq!(v["tag"], "Power");
    assert!((v["params"]["rho"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);

    let v = body(&nws(&["classify", "--a", "exp(t)", "--c", "3*exp(2*t)"]));
    assert_eq!(v["tag"], "Constant");
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
}

#[test]
fn operator_examples() {
    let o = nws(&["verify-operator", "--xi", "-3/x", "--eta", "-3*u/x^2", "--c", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(body(&o)["pass"], true);
    let o = nws(&["verify-operator", "--xi", "-3/x", "--eta", "-2*u/x^2", "--c", "1"]);
    assert_eq!(code(&o), 1);
    let v = body(&o);
    assert_eq!(v["equations"][2]["verdict"], false);
}

#[test]
fn every_fixture_passes_individually() {
    for fx in fixtures() {
        let i = fx.instance;
        let t = format!("{}:{}", fx.t.0, fx.t.1);
        let x = format!("{}:{}", fx.x.0, fx.x.1);
        let o = nws(&[
            "verify-solution", "--family", fx.family, "--a", i.a, "--b", i.b, "--c", i.c, "--t", &t, "--x", &x,
            "--params", fx.params,
        ]);
        assert_eq!(code(&o), 0, "{}: {}", fx.name(), String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn all_fixtures_in_order() {
    let o = nws(&["verify-solution", "--all"]);
    assert_eq!(code(&o), 0);
    let v = body(&o);
    let names: Vec<String> = v["fixtures"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().into()).collect();
    let expected: Vec<String> = fixtures().iter().map(|f| f.name()).collect();
    assert_eq!(names, expected);
}

#[test]
fn negative_controls_exit_one() {
    // family of the wrong λ branch
    let o = nws(&["verify-solution", "--family", "N1", "--b", "0.5", "--c", "exp(t)", "--t", "0:2"]);
    assert_eq!(code(&o), 1);
    // not reducible
    let o = nws(&["transform", "to-constant", "--b", "t", "--c", "1"]);
    assert_eq!(code(&o), 1);
    let o = nws(&["verify-solution", "--family", "TW", "--b", "t", "--c", "1"]);
    assert_eq!(code(&o), 1);
    // a residual threshold the solution cannot meet is still evaluated, at
    // the precision floor it fails
    let o = nws(&["verify-solution", "--family", "TW", "--b", "1", "--c", "1", "--x", "-6:6", "--tol", "1e-30"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn malformed_input_exits_two() {
    for args in [
        vec!["criterion", "--c", "exp("],
        vec!["criterion", "--c", "1", "--t", "2:1"],
        vec!["criterion", "--c", "x"],
        vec!["criterion", "--c", "t", "--t", "-1:1"],
        vec!["verify-solution", "--family", "Q7", "--c", "1"],
        vec!["verify-solution", "--family", "TW", "--b", "1", "--c", "1", "--params", "C9=1"],
        vec!["simulate", "--family", "TW", "--b", "1", "--c", "1", "--nx", "4"],
        vec!["classify", "--c", "1", "--format", "csv"],
        vec!["criterion", "--c", "1", "--tol", "-1"],
        vec!["no-such-command"],
    ] {
        let o = nws(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = nws(&["criterion", "--c", "exp("]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--c"));
}

#[test]
fn reports_are_reproducible() {
    for args in [
        vec!["criterion", "--c", "exp(t)", "--seed", "11"],
        vec!["classify", "--c", "exp(t^2)", "--t", "0.2:1"],
        vec!["verify-operator", "--xi", "-3/x", "--eta", "-3*u/x^2", "--c", "1", "--seed", "3"],
        vec!["transform", "gauge", "--a", "exp(t)", "--c", "exp(2*t)"],
        vec!["sample", "--family", "TW", "--b", "1", "--c", "1", "--format", "csv"],
        vec!["verify-solution", "--all"],
    ] {
        let (a, b) = (nws(&args), nws(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), 0, "{args:?}");
    }
}

#[test]
fn csv_outputs() {
    let o = nws(&["sample", "--family", "Z4", "--c", "1", "--x", "-1:1", "--nt", "2", "--nx", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "t,x,u\n0,-1,-1.4142135623730951\n0,0,\n0,1,1.4142135623730951\n1,-1,-1.4142135623730951\n1,0,\n1,1,1.4142135623730951\n");
    let o = nws(&["simulate", "--family", "TW", "--b", "1", "--c", "1", "--x", "-8:8", "--nx", "32", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("t,x,u\n0,-8,"));
    assert_eq!(text.lines().count(), 1 + 2 * 33);
}

#[test]
fn simulate_and_list() {
    let o = nws(&["simulate", "--family", "TW", "--b", "1", "--c", "1", "--x", "-8:8", "--nx", "100", "--study"]);
    assert_eq!(code(&o), 0);
    let v = body(&o);
    assert!(v["max_abs_error"].as_f64().unwrap() < 1e-4);
    for o in v["convergence"]["orders"].as_array().unwrap() {
        assert!((1.8..=2.2).contains(&o.as_f64().unwrap()));
    }
    let v = body(&nws(&["list-solutions"]));
    assert_eq!(v.as_array().unwrap().len(), 15);
    let v = body(&nws(&["list-solutions", "--lambda", "0"]));
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn out_path_and_parse_check() {
    let dir = std::env::temp_dir().join(format!("nws-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = nws(&["parse-check", "--c", "exp(-t)*t^2", "--xi", "-3/x", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v[0]["canonical"], "exp(-t)*t^2");
    assert_eq!(v[1]["variables"][0], "x");
    std::fs::remove_dir_all(&dir).unwrap();
}
