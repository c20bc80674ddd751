use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld")).args(args).output().unwrap()
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn charpoly_rank_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r3.json", r#"{"p": 3, "phi_T": ["T", "T^2 + 1", "T", "1"]}"#);
    let v = json(&run(&["charpoly", "--config", &cfg, "--prime", "T^7 - T^2 + 1"]));
    assert_eq!(v["charpoly"], "X^3 + (2T + 1)X^2 + (T^3 + T + 2)X + 2T^7 + T^2 + 2");
    assert_eq!(v["P"][0], "2T + 1");
}

#[test]
fn divisors_degree_eight() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r3.json", r#"{"p": 3, "phi_T": ["T", "T", "0", "1"]}"#);
    let v = json(&run(&["divisors", "--config", &cfg, "--prime", "T^8 + T^7 + T^6 + T^4 - T^3 - T^2 - 1"]));
    assert_eq!(v["divisors"][0], "1");
    assert_eq!(v["divisors"][1], "T^3 + 2T^2 + 2T + 1");
}

#[test]
fn endo_inseparable_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "f4.json", r#"{"p": 2, "n": 2, "fq_modulus": "w^2 + w + 1", "phi_T": ["T", "T", "1"]}"#);
    let v = json(&run(&["endo", "--config", &cfg, "--prime", "T^7 + T^5 + w^2T^4 + w^2T^2 + 1"]));
    assert_eq!(v["case"], "EVEN_INSEP");
    assert_eq!(v["c_pi"], "T^3 + T^2");
    assert_eq!(v["c_phi"], "T^2");
    assert_eq!(v["b"], "T + 1");
}

#[test]
fn scan_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "t1.json", r#"{"p": 3, "phi_T": ["T", "T", "1"]}"#);
    let out = dir.path().join("t1.csv");
    let res = run(&["--threads", "2", "scan", "--config", &cfg, "--degree", "6", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 25);
    assert!(text.starts_with("p,a,eps,c_pi,c_phi,delta_max\n"));
    let v = run(&["scan", "--config", &cfg, "--degree", "2", "--all", "--format", "json"]);
    let lines = String::from_utf8(v.stdout).unwrap();
    assert!(lines.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn find_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "t2.json", r#"{"p": 3, "phi_T": ["T", "1", "T"]}"#);
    let v = json(&run(&["find", "--config", &cfg, "--target-b1", "T", "--target-cphi", "T^2 - T - 1"]));
    assert_eq!(v["prime"], "T^7 + 2T^5 + 2T^4 + 2");

    let exhausted = run(&["find", "--config", &cfg, "--target-cphi", "T^2 - T - 1", "--max-degree", "4"]);
    assert_eq!(exhausted.status.code(), Some(3));
    let bad_prime = run(&["charpoly", "--config", &cfg, "--prime", "T^2 + 2"]);
    assert_eq!(bad_prime.status.code(), Some(2));
    let parse = run(&["charpoly", "--config", &cfg, "--prime", "T^2 +"]);
    assert_eq!(parse.status.code(), Some(2));
    let missing = run(&["charpoly", "--config", "/nonexistent/phi.json", "--prime", "T"]);
    assert_eq!(missing.status.code(), Some(1));
    let usage = run(&["scan"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn recip_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "t1.json", r#"{"p": 3, "phi_T": ["T", "T", "1"]}"#);
    let out = run(&["recip", "--config", &cfg, "--modulus", "T + 1", "--max-degree", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p,n,splits,trace_cong,index_cong,b1,d1_pred,d1,d2_pred,d2\n"));
    assert!(text.lines().skip(1).all(|l| !l.starts_with("T + 1,")));
}
