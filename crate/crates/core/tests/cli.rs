//! The `periodlab` binary: flags, configuration files, CSV output and exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_periodlab"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("periodlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn compensator_to_stdout() {
    let out = bin().args(["--experiment", "compensator"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,alpha,omega,Omega,G,K\n"));
    assert!(text.lines().count() > 10);
}

#[test]
fn config_file_and_output_path() {
    let cfg = scratch("m1.cfg");
    std::fs::write(&cfg, "# zero-M1 pair\nexperiment = traces\nm = 1\nalphas = -3\n").unwrap();
    let csv = scratch("m1.csv");
    let out = bin().arg("--config").arg(&cfg).arg("--out").arg(&csv).args(["--parallel", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("alpha,m,x,ratio,status\n"));
    assert_eq!(text.lines().count(), 16);
}

#[test]
fn tight_tolerance_is_an_acceptance_failure() {
    let out = bin().args(["--experiment", "traces", "--tol", "1e-6"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_with_three() {
    let out = bin().args(["--experiment", "no-such-thing"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "experiment = compensator\ncolour = blue\n").unwrap();
    let out = bin().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identities_are_seeded() {
    let run = |seed: &str| {
        let out = bin().args(["--experiment", "verify-identities", "--seed", seed]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}

#[test]
fn output_directory_override() {
    let dir = scratch("override");
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin()
        .env("PERIODLAB_OUTPUT_DIR", &dir)
        .args(["--experiment", "compensator", "--out", "table.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("table.csv").exists());
}
