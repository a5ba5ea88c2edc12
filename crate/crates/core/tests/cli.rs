mod common;

use std::process::{Command, Output};

use realtoric::cli::{self, CliError, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK};
use realtoric::Error;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realtoric")).args(args).env("REALTORIC_CORPUS", common::corpus_dir()).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("realtoric-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn klein_cohomology_text() {
    let o = run(&["cohomology", "klein"]);
    assert_eq!(o.status.code(), Some(EXIT_OK as i32));
    let out = stdout(&o);
    for line in ["H0 = Z", "H1 = Z", "H2 = Z_2"] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
    }
}

#[test]
fn json_output_parses() {
    let o = run(&["cohomology", "rp2xs1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cohomology"]["2"]["torsion"], serde_json::json!(["2"]));
    assert_eq!(v["cohomology"]["3"]["rank"], 0);
    assert_eq!(v["agree"], true);
}

#[test]
fn single_method_and_coefficients() {
    let o = run(&["cohomology", "rp3", "--method", "formula", "--coeff", "Q"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("H0 = Q") && out.contains("H2 = 0") && out.contains("H3 = Q"), "{out}");
    let o = run(&["cohomology", "klein", "--method", "cells", "--coeff", "Z2k:2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("H1 = Z_2 + Z_4"));
    let o = run(&["cohomology", "klein", "--coeff", "Zq:3"]);
    assert!(stdout(&o).contains("H2 = 0"));
}

#[test]
fn every_command_succeeds_on_the_corpus() {
    for name in ["klein", "rp3", "hexagon"] {
        for cmd in ["validate", "shelling", "cohomology", "bockstein", "table", "claim", "check"] {
            for format in ["text", "json"] {
                let o = run(&[cmd, name, "--format", format]);
                assert_eq!(o.status.code(), Some(0), "{cmd} {name} {format}: {}", String::from_utf8_lossy(&o.stderr));
                if format == "json" {
                    serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap_or_else(|e| panic!("{cmd} {name}: {e}"));
                }
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["check", "torus4"][..], &["table", "hexagon", "--format", "json"], &["bockstein", "rp4"]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn invalid_instances_exit_with_code_two() {
    let bad_width = write_tmp("width.json", r#"{"m":4,"facets":[[1,2],[2,3],[3,4],[1,4]],"lambda":[[1,0,1],[0,1,0,1]]}"#);
    let singular = write_tmp("singular.json", r#"{"m":4,"facets":[[1,2],[2,3],[3,4],[1,4]],"lambda":[[1,0,1,1],[1,0,1,1]]}"#);
    let not_shelling = write_tmp("order.json", r#"{"m":4,"facets":[[1,2],[3,4],[2,3],[1,4]],"lambda":[[1,0,1,1],[0,1,0,1]],"shelling":[1,2,3,4]}"#);
    let truncated = write_tmp("trunc.json", r#"{"m":4,"#);
    let unknown = write_tmp("unknown.json", r#"{"m":4,"facets":[[1,2],[2,3],[3,4],[1,4]],"lambda":[[1,0,1,1],[0,1,0,1]],"extra":1}"#);
    for path in [&bad_width, &singular, &not_shelling, &truncated, &unknown] {
        let o = run(&["cohomology", path]);
        assert_eq!(o.status.code(), Some(EXIT_INVALID as i32), "{path}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(run(&["validate", "no-such-instance"]).status.code(), Some(EXIT_INVALID as i32));
    assert_eq!(run(&["cohomology", "klein", "--coeff", "Zq:1"]).status.code(), Some(EXIT_INVALID as i32));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(EXIT_INVALID as i32));
}

#[test]
fn mismatches_map_to_code_one() {
    assert_eq!(CliError::Compute(Error::Mismatch("x".into())).exit_code(), EXIT_MISMATCH);
    assert_eq!(CliError::Validation("x".into()).exit_code(), EXIT_INVALID);
}

#[test]
fn missing_shelling_is_found() {
    let path = write_tmp("noshell.json", r#"{"m":4,"facets":[[1,2],[3,4],[2,3],[1,4]],"lambda":[[1,0,1,1],[0,1,0,1]]}"#);
    let o = run(&["cohomology", &path]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("H2 = Z_2"));
}

#[test]
fn corpus_directory_comes_from_the_environment() {
    let dir = std::env::temp_dir().join(format!("realtoric-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(common::corpus_dir().join("rp2.json"), dir.join("projective.json")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_realtoric")).args(["cohomology", "projective"]).env(cli::CORPUS_ENV, &dir).output().unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("H1 = 0"));
}
