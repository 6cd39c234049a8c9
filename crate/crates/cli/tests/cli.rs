use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagsoc")).args(args).env_remove("FLAGSOC_CACHE").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn hvchar_verify_b2() {
    let out = run(&["hvchar", "--type", "B2", "--parabolic", "a2", "--p", "5", "--verify"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["identity"], "pass");
}

#[test]
fn kapranov_count() {
    let out = run(&["poset-verify", "--family", "kapranov-a2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["nonzero_homs"], 14);
    assert_eq!(v["bruhat_shape"], false);
    let into = v["homs_into"].as_array().unwrap();
    let s1s2 = into.iter().find(|e| e["w"] == "s1s2").unwrap();
    assert_eq!(s1s2["nonzero_homs_into"], 4);
}

#[test]
fn quadric_3_3() {
    let out = run(&["quadric", "--n", "3", "--p", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["rank_sum"], 27);
    assert_eq!(v["conserved"], true);
    let csv = run(&["quadric", "--n", "3", "--p", "3", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("summand,rank,multiplicity\n"));
}

#[test]
fn shipped_ledger_and_mutation() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/ledgers/g2_pa2.ledger");
    let out = run(&["ledger", "check", path]);
    assert!(out.status.success());
    assert_eq!(json(&out)["pass"], true);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ledger");
    let text = std::fs::read_to_string(path).unwrap().replace("axiom s2s1s2s1\n", "");
    std::fs::write(&bad, text).unwrap();
    let out = run(&["ledger", "check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["failure"].as_str().unwrap().starts_with("line "));
}

#[test]
fn deterministic_and_cache_stable() {
    let a = run(&["exts", "--type", "B2", "--parabolic", "a1"]);
    let b = run(&["exts", "--type", "B2", "--parabolic", "a1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("kl.json");
    let args = ["socle", "--type", "A2", "--p", "5", "--format", "csv", "--cache", cache.to_str().unwrap()];
    let cold = run(&args);
    assert!(cache.exists());
    let warm = run(&args);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, run(&["socle", "--type", "A2", "--p", "5", "--format", "csv"]).stdout);
}

#[test]
fn socle_summary_and_k0() {
    let v = json(&run(&["socle", "--type", "B2", "--parabolic", "a1", "--p", "5"]));
    assert_eq!(v["mass"], v["expected_mass"]);
    assert_eq!(v["loewy_length"], v["expected_loewy_length"]);
    let k = run(&["k0-matrix", "--type", "G2", "--parabolic", "a2"]);
    assert!(k.status.success());
    assert_eq!(json(&k)["det"].as_str().unwrap().trim_start_matches('-'), "1");
}

#[test]
fn errors_are_reported() {
    let out = run(&["socle", "--type", "B2", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("not prime"));
    assert!(!run(&["frobnicate"]).status.success());
    assert_eq!(run(&["hvchar", "--type", "A2", "--p", "5", "--nu", "1"]).status.code(), Some(2));
}

#[test]
fn roots_and_weyl() {
    let v = json(&run(&["roots", "--type", "G2"]));
    assert_eq!(v["positive_roots"].as_array().unwrap().len(), 6);
    let w = json(&run(&["weyl", "--type", "G2", "--parabolic", "a2"]));
    assert_eq!(w["min_coset_reps"].as_array().unwrap().len(), 6);
    let c = json(&run(&["weyl", "--type", "G2", "--character", "0,1"]));
    assert_eq!(c["dim"], 14);
}
