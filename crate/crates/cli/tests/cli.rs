use std::path::Path;
use std::process::{Command, Output};

use moufang_core::field::FiniteField;
use moufang_core::jordan::QuadraticJordan;
use moufang_core::report::seeded_random_tau;
use serde_json::Value;

fn moufang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moufang")).args(args).env_remove("MOUFANG_CAP").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["check"] == name).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn field_reports() {
    let out = moufang(&["field", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(check(&r, "little-projective")["detail"]["order"], 60);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass" && c.get("timing_ms").is_none()));

    let r2 = json(&moufang(&["field", "--q", "2", "--checks", "proper"]));
    assert_eq!(check(&r2, "proper")["detail"]["proper"], false);
    assert_eq!(r2["checks"].as_array().unwrap().len(), 1);

    let r9 = json(&moufang(&["field", "--q", "9", "--checks", "centroid"]));
    assert_eq!(check(&r9, "centroid")["detail"]["size"], 9);

    let timed = json(&moufang(&["field", "--q", "3", "--checks", "criterion", "--timings"]));
    assert!(check(&timed, "criterion").get("timing_ms").is_some());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(moufang(&["field", "--q", "6"]).status.code(), Some(2));
    assert_eq!(moufang(&["field", "--q", "5", "--checks", "bogus"]).status.code(), Some(2));
    assert_eq!(moufang(&[]).status.code(), Some(2));
    assert_eq!(moufang(&["nearfield", "dickson", "--q", "5", "--coupling", "char"]).status.code(), Some(2));
    assert_eq!(moufang(&["suite", "--profile", "huge"]).status.code(), Some(2));
}

#[test]
fn dickson_nearfields() {
    let out = moufang(&["nearfield", "dickson", "--q", "9", "--coupling", "CHAR"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(check(&r, "t3")["detail"]["order"], 720);
    assert_eq!(check(&r, "pgl2-separation")["detail"]["separated"], true);
    assert_eq!(check(&r, "pseudo-square")["detail"]["pairs"], 72);

    let t = json(&moufang(&["nearfield", "dickson", "--q", "5", "--coupling", "trivial"]));
    assert_eq!(check(&t, "t3")["detail"]["order"], 120);
}

#[test]
fn nearfield_tables() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "f3.txt", "3 1\n0 1\n0 0 0\n0 1 2\n0 2 1\n");
    let out = moufang(&["nearfield", "table", "--file", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(check(&json(&out), "t3")["detail"]["order"], 24);

    let bad = write(dir.path(), "bad.txt", "3 1\n0 1\n0 0 0\n0 1 two\n0 2 1\n");
    let out = moufang(&["nearfield", "table", "--file", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    // not right distributive: a·b = a on nonzero b is not a nearfield
    let broken = write(dir.path(), "broken.txt", "3 1\n0 1\n0 0 0\n0 1 1\n0 2 2\n");
    assert_eq!(moufang(&["nearfield", "table", "--file", &broken]).status.code(), Some(1));

    let f9 = FiniteField::of_order(9).unwrap();
    let phi: Vec<u32> = f9.nonzero().map(|a| if f9.is_square(a) { 0 } else { 1 }).collect();
    let spec = serde_json::json!({ "p": 3, "f": 2, "phi": phi }).to_string();
    let path = write(dir.path(), "d9.json", &spec);
    let r = json(&moufang(&["nearfield", "table", "--file", &path, "--checks", "t3,k-sigma"]));
    assert_eq!(check(&r, "t3")["detail"]["order"], 720);
    assert_eq!(check(&r, "k-sigma")["status"], "pass");
}

#[test]
fn suite_is_deterministic_and_detects_faults() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = moufang(&["suite", "--profile", "quick", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(report["passed"], true);

    let c = dir.path().join("c.json");
    let out = moufang(&["suite", "--profile", "quick", "--inject-fault", "--out", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&std::fs::read(&c).unwrap()).unwrap();
    let fault = report["reports"].as_array().unwrap().last().unwrap();
    assert_eq!(fault["checks"][0]["status"], "fail");
    assert!(fault["checks"][0]["witness"].is_string());
}

#[test]
fn jordan_and_descriptor_files() {
    let dir = tempfile::tempdir().unwrap();
    let f4 = FiniteField::of_order(4).unwrap();
    let field = write(dir.path(), "f4.txt", &QuadraticJordan::field_jordan(&f4).to_text());
    assert_eq!(moufang(&["jordan", "--file", &field]).status.code(), Some(0));

    let f2 = FiniteField::of_order(2).unwrap();
    let matrix = write(dir.path(), "m2.txt", &QuadraticJordan::matrix_jordan(&f2).to_text());
    let out = moufang(&["jordan", "--file", &matrix]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(check(&json(&out), "axioms")["status"], "pass");
    assert_eq!(check(&json(&out), "division")["status"], "fail");

    let random = serde_json::to_string(&seeded_random_tau(5, 7).descriptor()).unwrap();
    let path = write(dir.path(), "random.json", &random);
    let out = moufang(&["load", "--file", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(check(&json(&out), "criterion")["witness"].is_string());

    let garbage = write(dir.path(), "garbage.json", "{\"p\": 5}");
    assert_eq!(moufang(&["load", "--file", &garbage]).status.code(), Some(2));
}

#[test]
fn cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_moufang"))
        .args(["field", "--q", "9", "--checks", "little-projective"])
        .env("MOUFANG_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(check(&r, "little-projective")["witness"].as_str().unwrap().contains("exceeded 10"));
}
