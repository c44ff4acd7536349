//! The built binary: exit codes, summary lines, file output and the seed variable.

use std::process::{Command, Output};

use matkern::cli::write_fixtures;

fn matkern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matkern")).args(args).output().expect("spawn matkern")
}

fn last_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).lines().last().unwrap_or_default().to_string()
}

#[test]
fn solve_dpc_reports_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixtures(dir.path()).unwrap();
    let out = matkern(&["solve-dpc", f.digraph.to_str().unwrap(), f.pairs.to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(last_line(&out), "RESULT YES FAILPROB 0.000e0 SEED 0");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("BEGIN witness\n1 2 3\nEND witness\n"), "{text}");
    let out = matkern(&["solve-dpc", f.digraph.to_str().unwrap(), f.pairs.to_str().unwrap(), "--k", "0"]);
    assert_eq!(last_line(&out), "RESULT NO FAILPROB 0.000e0 SEED 0");
}

#[test]
fn two_sat_prints_an_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.cnf2");
    std::fs::write(&path, "c implication chain\np cnf2 3 3\n1 0\n-1 2 0\n-2 3 0\n").unwrap();
    let out = matkern(&["solve-2sat", path.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("ASSIGNMENT 1 2 3"), "{text}");
    assert!(last_line(&out).starts_with("RESULT SAT "));
}

#[test]
fn malformed_input_exits_two_and_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cnf2");
    std::fs::write(&path, "p cnf2 2 2\n1 2 0\n1 2 3 0\n").unwrap();
    let out = matkern(&["solve-2sat", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    let out = matkern(&["solve-2sat", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_smwc_rejects_more_terminals_than_parts() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixtures(dir.path()).unwrap();
    let g = f.graph.to_str().unwrap();
    let t = f.terminals.to_str().unwrap();
    let out = matkern(&["kernel-smwc", g, "--terminals", t, "--k", "2", "--parts", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = matkern(&["kernel-smwc", g, "--terminals", t, "--k", "2", "--parts", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_prefix_and_seed_variable() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixtures(dir.path()).unwrap();
    let prefix = dir.path().join("cover");
    let out = Command::new(env!("CARGO_BIN_EXE_matkern"))
        .args(["cover-multiway", f.graph.to_str().unwrap(), "--terminals", f.terminals.to_str().unwrap(), "--parts", "2"])
        .args(["--out", prefix.to_str().unwrap()])
        .env("MATKERN_SEED", "41")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(last_line(&out).ends_with(" SEED 41"));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("WROTE "), "{text}");
    assert!(!text.contains("BEGIN "), "{text}");
    let written = std::fs::read_dir(dir.path()).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("cover.")).count();
    assert!(written >= 1);
}

#[test]
fn quick_selftest_passes() {
    let out = matkern(&["selftest", "--quick", "--seed", "5"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion ")).count(), 11);
    assert!(last_line(&out).starts_with("RESULT 11/11 "));
}
