use std::path::PathBuf;
use std::process::{Command, Output};

fn udword(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udword"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("udword-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_decomposable() {
    let o = udword(&["classify", "XAXAX"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("totally decomposable"));
    assert!(s.contains("X = A^(-1/2)"));
    assert!(s.contains("verdict: decomposable"));

    let o = udword(&["classify", "X", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"], serde_json::json!([]));
    assert_eq!(v["solution"], "B");
}

#[test]
fn classify_not_decomposable() {
    let o = udword(&["classify", "X^2AX", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decomposable"], false);
    assert_eq!(v["verdict"], "evidence-not-universal");
    assert_eq!(v["certificate"]["family"], "XnAXm");
    assert_eq!(v["certificate"]["verdict"], "certified-not-radical");
    assert_eq!(v["profile"]["exceptional"], serde_json::json!([5]));
}

#[test]
fn parse_errors_point_at_the_problem() {
    let o = udword(&["classify", "XA(X"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("position 2"), "{err}");
    assert!(err.contains("    ^"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(udword(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(udword(&["solve", "XAX", "--backend", "gl:3"]).status.code(), Some(1));
    assert_eq!(udword(&["survey", "--max-len", "13"]).status.code(), Some(1));
    assert!(udword(&["--help"]).status.success());
}

#[test]
fn decompose_and_poly() {
    let o = udword(&["decompose", "XAX^2AXAXAX^2AX"]);
    let s = stdout(&o);
    assert!(s.starts_with("XAX^2AXAXAX^2AX = pi(1,1) o pi(1,0) o pi(1,1) (X)"), "{s}");
    let o = udword(&["decompose", "X^2AX"]);
    assert!(stdout(&o).contains("not totally decomposable"));
    assert_eq!(stdout(&udword(&["poly", "X^2AX"])).trim(), "1 + x + x^2*y");
    assert_eq!(stdout(&udword(&["poly", "XAXAX", "--squared"])).trim(), "1 + x^2*y^2 + x^4*y^4");
}

#[test]
fn scan_writes_csv() {
    let path = scratch("scan.csv");
    let o = udword(&["scan", "XAXAX", "--pmin", "5", "--pmax", "31", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("exceptional: [5, 11, 17, 23, 29]"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("p,solvable,x,y\n5,false,,\n7,true,"));
}

#[test]
fn counterexample_reports() {
    let o = udword(&["counterexample", "X^2AX", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["p"], 11);
    assert_eq!(v["order"], 55);
    assert_eq!(v["no_solution_verified"], true);
    assert!(v["collision"].is_object());

    let o = udword(&["counterexample", "XAXAX"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("totally decomposable"));

    let o = udword(&["counterexample", "XAX^3AX"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("no solution"));
}

#[test]
fn solve_backends() {
    let o = udword(&["solve", "XAX", "--backend", "ut:3", "--seed", "7", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["formulas"].as_array().unwrap().len(), 2);
    assert!(v["formulas"].as_array().unwrap().iter().all(|f| f["agrees"] == true));

    let o = udword(&["solve", "XAX", "--backend", "series:4", "--generic"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("w(X, A) = B: verified"));

    let o = udword(&["solve", "XX", "--backend", "ut:4"]);
    assert!(stdout(&o).contains("B^(1/2): agrees"));

    let o = udword(&["solve", "X^2AX", "--backend", "ut:4", "--seed", "1"]);
    assert!(o.status.success());
}

#[test]
fn solve_from_files() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    std::fs::write(&a, r#"{"dim":2,"entries":["1","1/2","0","1"]}"#).unwrap();
    std::fs::write(&b, r#"{"dim":2,"entries":["1","3","0","1"]}"#).unwrap();
    let o = udword(&["solve", "XAX", "--backend", "ut:2", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // 2x + 1/2 = 3 in the corner entry.
    assert_eq!(v["x"]["entries"], serde_json::json!(["1", "5/4", "0", "1"]));

    let o = udword(&["solve", "XAX", "--backend", "ut:3", "--a", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&a, r#"{"dim":2,"entries":["2","0","0","1"]}"#).unwrap();
    let o = udword(&["solve", "XAX", "--backend", "ut:2", "--a", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn survey_outputs_and_exit_codes() {
    let out = scratch("s4.jsonl");
    let o = udword(&["survey", "--max-len", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let jsonl = std::fs::read_to_string(&out).unwrap();
    assert_eq!(jsonl.lines().count(), 8);
    assert!(jsonl.lines().any(|l| l.contains(r#""word":"XA^2X""#) && l.contains("pi(1,2)")));
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);

    let again = udword(&["survey", "--max-len", "6", "--sequential"]);
    let par = udword(&["survey", "--max-len", "6"]);
    assert_eq!(again.stdout, par.stdout);

    // X^2A^4X has 17 as an exceptional prime.
    let o = udword(&["survey", "--max-len", "7", "--pmax", "97"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unresolved: X^2A^4X"));
    let o = udword(&["survey", "--max-len", "7", "--pmax", "97", "--cutoff", "17"]);
    assert_eq!(o.status.code(), Some(0));
}
