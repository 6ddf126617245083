use std::io::Write;
use std::process::{Command, Stdio};

use qracah_td::cli::{run, Outcome};
use serde_json::{json, Value};

const D1: &str = r#"{"d":1,"thetas":["13/2","7/2"],"theta_stars":["9/2","3"],"zetas":["1","-225/8"]}"#;
const D2: &str = r#"{"d":2,"q":"2","thetas":["49/4","4","19/4"],"theta_stars":["33/4","3","9/2"],"zetas":["1","-1521/16","1265625/256"]}"#;
const SUM_ZERO: &str = r#"{"d":1,"thetas":["13/2","7/2"],"theta_stars":["9/2","3"],"zetas":["1","-9/2"]}"#;
const MODULE: &str = r#"{"q":2,"alphas":[1],"params":{"a":0,"b":1,"c":3,"a*":0,"b*":1,"c*":2}}"#;

fn cli(args: &[&str], stdin: &str) -> Outcome {
    let argv = std::iter::once("qracah-td").chain(args.iter().copied());
    run(argv, &mut stdin.as_bytes())
}

fn json_out(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", o.stdout))
}

#[test]
fn roundtrip_d1() {
    let o = cli(&["roundtrip"], D1);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_out(&o);
    assert_eq!(v["equal"], json!(true));
    assert_eq!(v["backend"], json!("exact"));
    assert_eq!(v["shape"], json!([1, 1]));
}

#[test]
fn construct_d2_exact() {
    let o = cli(&["construct"], D2);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_out(&o);
    assert_eq!(v["dim"], json!(4));
    assert_eq!(v["shape"], json!([1, 2, 1]));
    assert_eq!(v["A"].as_array().unwrap().len(), 4);
    assert_eq!(v["E"].as_array().unwrap().len(), 3);
}

#[test]
fn refusal_exits_one_with_reason() {
    let o = cli(&["construct"], SUM_ZERO);
    assert_eq!(o.code, 1);
    let v = json_out(&o);
    assert_eq!(v["status"], json!("refused"));
    assert_eq!(v["reason"], json!("condition-ii-sum-zero"));
    assert_eq!(v["certificate"]["sum"], json!("0"));
    assert!(o.stderr.contains("existence criterion"));
}

#[test]
fn malformed_input_exits_two() {
    let o = cli(&["construct"], "{not json");
    assert_eq!(o.code, 2);
    assert_eq!(json_out(&o)["reason"], json!("parse-error"));
    let o = cli(&["construct"], r#"{"d":3,"thetas":["1","2"],"theta_stars":["1","2"],"zetas":["1","2"]}"#);
    assert_eq!(o.code, 2);
    assert_eq!(json_out(&o)["reason"], json!("dimension-mismatch"));
    assert_eq!(cli(&["--mode", "complex", "--precision", "32", "construct"], D1).code, 2);
    assert_eq!(cli(&["frobnicate"], "").code, 2);
    let o = cli(&["--max-d", "1", "construct"], D2);
    assert_eq!((o.code, json_out(&o)["reason"].clone()), (2, json!("diameter-limit")));
}

#[test]
fn drinfeld_worked_example() {
    let o = cli(&["drinfeld"], MODULE);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_out(&o);
    assert_eq!(v["zetas"], json!(["1", "-225/8"]));
    assert_eq!(v["sigmas"], json!(["1", "-25/2"]));
    assert_eq!(v["P"], json!(["11/2", "1"]));
}

#[test]
fn verify_construct_output() {
    let built = cli(&["construct"], D2);
    let o = cli(&["verify"], &built.stdout);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_out(&o);
    assert_eq!(v["td_pair"], json!(true));
    assert_eq!(v["orderings"].as_array().unwrap().len(), 2);
    assert_eq!(v["irreducibility"]["verdict"], json!("irreducible"));
}

#[test]
fn relations_and_shape_pass() {
    let o = cli(&["relations"], MODULE);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json_out(&o)["passed"], json!(true));
    let built = cli(&["construct"], D2);
    let o = cli(&["shape"], &built.stdout);
    let v = json_out(&o);
    assert_eq!((v["passed"].clone(), v["shape"].clone()), (json!(true), json!([1, 2, 1])));
}

#[test]
fn complex_mode_construct() {
    let o = cli(&["--mode", "complex", "roundtrip"], D2);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_out(&o);
    assert_eq!((v["equal"].clone(), v["backend"].clone()), (json!(true), json!("complex")));
}

#[test]
fn output_file_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let list = format!("[{D1}, {D2}, {D1}]");
    let o = cli(&["--jobs", "3", "-o", path.to_str().unwrap(), "roundtrip"], &list);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["all_equal"], json!(true));
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    let serial = cli(&["roundtrip"], &list);
    assert_eq!(json_out(&serial), v);
}

#[test]
fn input_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(MODULE.as_bytes()).unwrap();
    let o = cli(&["drinfeld", f.path().to_str().unwrap()], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(cli(&["drinfeld", "/nonexistent/input.json"], "").code == 2);
}

fn binary(args: &[&str], stdin: &str) -> (i32, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qracah-td"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), out.stdout)
}

#[test]
fn binary_exit_codes_and_determinism() {
    let (code, first) = binary(&["construct", "-"], D2);
    assert_eq!(code, 0);
    let (_, second) = binary(&["construct"], D2);
    assert_eq!(first, second);
    assert_eq!(binary(&["construct"], SUM_ZERO).0, 1);
    assert_eq!(binary(&["construct"], "[]").0, 2);
}
