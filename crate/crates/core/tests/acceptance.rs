//! Acceptance suite at full scale. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Criterion 11 spawns the built binary.

use std::path::Path;
use std::process::{Command, ExitCode};

use matkern::acceptance::{run_criterion, CriterionReport, Scale, TITLES};
use matkern::cli::{determinism_commands, write_fixtures};

const SEED: u64 = 20240;

/// Stdout, stderr, exit code and every file written under `out_dir`, in name order.
fn capture(args: &[String], out_dir: &Path) -> (Vec<u8>, Vec<u8>, Option<i32>, Vec<(String, Vec<u8>)>) {
    let out = Command::new(env!("CARGO_BIN_EXE_matkern")).args(args).output().expect("spawn matkern");
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(out_dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    (out.stdout, out.stderr, out.status.code(), files)
}

fn spawned_determinism() -> CriterionReport {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = write_fixtures(dir.path()).unwrap();
    let mut commands = determinism_commands(&fixtures, SEED);
    // the same commands again with instances written to files
    let with_out: Vec<Vec<String>> = commands
        .iter()
        .enumerate()
        .filter(|(_, c)| c[0].starts_with("kernel-") || c[0].starts_with("cover-") || c[0] == "compress-dpc" || c[0] == "reduce-vclp")
        .map(|(i, c)| {
            let mut c = c.clone();
            c.extend(["--out".into(), format!("{{OUT}}/run{i}")]);
            c
        })
        .collect();
    commands.extend(with_out);
    let (mut differing, mut failing) = (Vec::new(), Vec::new());
    for cmd in &commands {
        let runs: Vec<_> = (0..2)
            .map(|_| {
                let out_dir = tempfile::tempdir().unwrap();
                let args: Vec<String> = cmd.iter().map(|a| a.replace("{OUT}", &out_dir.path().display().to_string())).collect();
                let (stdout, stderr, code, files) = capture(&args, out_dir.path());
                // output paths differ between the two runs; compare with the directory masked
                let mask = |b: Vec<u8>| String::from_utf8_lossy(&b).replace(&out_dir.path().display().to_string(), "{OUT}");
                (mask(stdout), mask(stderr), code, files)
            })
            .collect();
        let name = cmd[..2].join(" ") + if cmd.iter().any(|a| a == "--out") { " --out" } else { "" };
        if runs[0].2 != Some(0) {
            failing.push(name.clone());
        }
        if runs[0] != runs[1] {
            differing.push(name);
        }
    }
    CriterionReport {
        id: 11,
        passed: differing.is_empty() && failing.is_empty(),
        detail: format!(
            "{} commands spawned twice with seed {SEED}, differing: {differing:?}, nonzero exit: {failing:?}",
            commands.len()
        ),
    }
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=11 {
        let report = if id == 11 {
            spawned_determinism()
        } else {
            run_criterion(id, Scale::Full, SEED).unwrap_or_else(|e| CriterionReport {
                id,
                passed: false,
                detail: format!("error: {e}"),
            })
        };
        println!("{report}");
        if !report.passed {
            failed.push(format!("{id} ({})", TITLES[id - 1]));
        }
    }
    if failed.is_empty() {
        println!("acceptance: 11/11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
