use std::process::{Command, Output};

use serde_json::Value;

fn zhu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zhu")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = zhu(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn power_expansion_for_sl2() {
    let v = json(&["zhu-power", "--algebra", "A1", "--e", "f_theta", "--level", "2", "--k", "3"]);
    assert_eq!(v["matches_formula"], true);
    let p = v["powers"].as_array().unwrap();
    assert_eq!(p.len(), 3);
    // i(e)^2 = [e^2] + 2[e] + 2[1] at level 2, i(e)^3 = [e^3]
    assert_eq!(p[1]["formula_coefficients"], serde_json::json!(["2/1", "2/1", "1/1"]));
    assert_eq!(p[2]["formula_coefficients"], serde_json::json!(["0/1", "0/1", "0/1", "1/1"]));
    assert_eq!(p[2]["class"], "[[e(-1) e(-1) e(-1) 1]]");
}

#[test]
fn simple_vacuum_graded_dims_csv() {
    let out = zhu(&["graded-dims", "--algebra", "A1", "--level", "1", "--lambda", "0", "--depth", "2", "--simple", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "weight_numerator,T,dim\n0,1,1\n1,1,3\n2,1,4\n");
}

#[test]
fn twisted_jacobi_passes() {
    let out = zhu(&["verify", "--identity", "twisted-jacobi", "--algebra", "A2", "--mu", "flip", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["instances"], 64);
    assert!(v["checked"].as_u64().unwrap() > 0);
}

#[test]
fn other_identities_pass() {
    for args in [
        vec!["verify", "--identity", "jacobi", "--algebra", "A1", "--depth", "2"],
        vec!["verify", "--identity", "commutator", "--algebra", "A1", "--e", "f", "--depth", "2"],
        vec!["verify", "--identity", "weak-assoc", "--algebra", "A1", "--e", "f", "--depth", "2"],
        vec!["verify", "--identity", "power-field", "--algebra", "A2", "--mu", "flip", "--depth", "2"],
        vec!["verify", "--identity", "lie-relation", "--algebra", "A1", "--e", "f", "--depth", "3"],
        vec!["verify", "--identity", "ideal", "--algebra", "A1", "--depth", "4"],
        vec!["verify", "--identity", "associativity", "--algebra", "A1", "--e", "f", "--depth", "3"],
    ] {
        let out = zhu(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn classification_and_map_i() {
    let v = json(&["classify", "--algebra", "A1", "--level", "1", "--k", "2"]);
    assert_eq!(v["admissible"], serde_json::json!([[0], [1]]));
    let v = json(&["map-i-check", "--algebra", "A2", "--mu", "flip", "--depth", "3", "--k", "2"]);
    assert_eq!(v["injective"], true);
    let out = zhu(&["classify", "--algebra", "A2", "--mu", "flip", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("lambda,omega_dim,singular_vanishes,theta_power_vanishes,admissible"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 1);
}

#[test]
fn twisted_dims_use_the_order_lattice() {
    let out = zhu(&["twisted-graded-dims", "--algebra", "A2", "--mu", "flip", "--lambda", "1", "--depth", "1", "--simple", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "weight_numerator,T,dim\n0,2,2\n1,2,4\n2,2,6\n");
}

#[test]
fn zhu_product_of_currents() {
    let v = json(&["zhu-product", "--algebra", "A1", "--u", "e(-1)1", "--v", "f(-1)1", "--depth", "2"]);
    assert_eq!(v["product"]["class"], "[[h(-1) 1] + [e(-1) f(-1) 1]]");
    // f*e = e(-1)f(-1)1 - h(-2)1 - h(-1)1 and h(-2)1 ≡ -h(-1)1
    let w = json(&["zhu-product", "--algebra", "A1", "--u", "f(-1)1", "--v", "e(-1)1", "--depth", "2"]);
    assert_eq!(w["product"]["class"], "[[e(-1) f(-1) 1]]");
}

#[test]
fn output_is_deterministic_and_round_trips() {
    for args in [
        vec!["build-algebra", "--algebra", "B2"],
        vec!["eigen-decomp", "--algebra", "D4", "--mu", "triality"],
        vec!["zhu-dims", "--algebra", "A1", "--e", "f", "--depth", "3"],
    ] {
        let a = zhu(&args);
        let b = zhu(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again.as_bytes(), &a.stdout[..]);
        let reparsed: Value = serde_json::from_str(&again).unwrap();
        assert_eq!(reparsed, v);
    }
}

#[test]
fn out_flag_writes_the_artifact() {
    let path = std::env::temp_dir().join(format!("zhu-cli-{}.json", std::process::id()));
    let out = zhu(&["build-algebra", "--algebra", "A2", "--mu", "flip", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["fixed_dim"], 3);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(zhu(&["build-algebra", "--algebra", "X9"]).status.code(), Some(1));
    assert_eq!(zhu(&["build-algebra"]).status.code(), Some(1));
    assert_eq!(zhu(&["build-algebra", "--algebra", "A2", "--mu", "1,0,2"]).status.code(), Some(1));
    assert_eq!(zhu(&["zhu-dims", "--algebra", "A1", "--level", "-2"]).status.code(), Some(1));
    assert_eq!(zhu(&["build-algebra", "--algebra", "A1", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(zhu(&["twisted-graded-dims", "--algebra", "A2", "--mu", "flip", "--lambda", "1,1"]).status.code(), Some(1));
    let over = zhu(&["zhu-product", "--algebra", "A1", "--depth", "1", "--u", "e(-1)e(-1)1", "--v", "1"]);
    assert_eq!(over.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&over.stderr).contains("truncation"));
}
