mod common;

use std::path::PathBuf;

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn klein_claim_report_k1() {
    let rep = common::load("klein").claim_check(1).unwrap();
    assert_eq!(format!("{rep}\n"), golden("klein_claim_k1.txt"));
    let d1 = &rep.degrees[1];
    assert_eq!(d1.lhs.order().unwrap(), 8.into());
    assert_eq!(d1.rhs_literal.order().unwrap(), 2.into());
    assert!(!d1.literal_match());
    assert!(d1.doubled_match());
}

#[test]
fn klein_claim_report_k2() {
    let rep = common::load("klein").claim_check(2).unwrap();
    assert_eq!(format!("{rep}\n"), golden("klein_claim_k2.txt"));
}

#[test]
fn klein_cohomology_json() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_realtoric"))
        .args(["cohomology", "klein", "--format", "json"])
        .env("REALTORIC_CORPUS", common::corpus_dir())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("klein_cohomology.json"));
}
