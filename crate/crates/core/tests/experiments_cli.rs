use std::fs;
use std::path::Path;
use std::process::Command;

use contact_lab::experiments::{evaluate_suite, run_cli, ExperimentConfig, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use contact_lab::Error;

fn lab() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_contact-lab"));
    cmd.env_remove("CONTACT_LAB_OUT");
    cmd
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn identity_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let status = lab()
        .args(["verify-complex", "--grid", "16", "--seed", "7", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    let json = fs::read_to_string(dir.path().join("verify-complex.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 4);
}

#[test]
fn missing_config_is_a_usage_error() {
    let status = lab().args(["solve-psi", "--config", "missing.cfg"]).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
}

#[test]
fn unknown_suite_and_bad_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let status = lab().arg("no-such-suite").arg("--out").arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
    assert_eq!(lab().status().unwrap().code(), Some(EXIT_USAGE));
    let status = lab().args(["verify-complex", "--grid", "12"]).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
}

#[test]
fn repeated_runs_write_identical_tables() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let status = lab().args(["exp-taylor", "--out"]).arg(dir.path()).status().unwrap();
        assert_eq!(status.code(), Some(EXIT_OK));
    }
    let (ta, tb) = (csv_files(a.path()), csv_files(b.path()));
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn environment_names_the_output_only_without_the_flag() {
    let (env_dir, flag_dir) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let status = lab().arg("exp-taylor").env("CONTACT_LAB_OUT", env_dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    assert!(env_dir.path().join("exp-taylor.json").exists());
    let status = lab()
        .args(["exp-taylor", "--out"])
        .arg(flag_dir.path())
        .env("CONTACT_LAB_OUT", env_dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    assert!(flag_dir.path().join("exp-taylor.json").exists());
}

#[test]
fn failing_check_sets_exit_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.cfg");
    fs::write(&cfg, "# impossible bound\nthreshold.b_consistency = 1e-300\n").unwrap();
    let out = dir.path().join("out");
    let output = lab()
        .args(["exp-taylor", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(EXIT_CHECK_FAILED));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.lines().any(|l| l.starts_with("FAIL b_consistency")));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "grid = 8\nband = 3\nseed = 1\n").unwrap();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["contact-lab", "exp-taylor", "--seed", "9", "--config"];
    let code = run_cli(
        args.iter().map(|s| s.to_string()).chain([
            cfg.display().to_string(),
            "--out".into(),
            dir.path().join("out").display().to_string(),
        ]),
        &mut out,
        &mut err,
    );
    assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&err));
    let json = fs::read_to_string(dir.path().join("out/exp-taylor.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(report["config"]["grid"], 8);
    assert_eq!(report["config"]["seed"], 9);
}

#[test]
fn invalid_settings_are_rejected() {
    for text in ["grid = 24", "band = 0", "solver_tol = -1", "s_max = 9", "grid = sixteen", "colour = blue"] {
        assert!(ExperimentConfig::from_text(text).and_then(|c| c.validate()).is_err(), "{text}");
    }
}

#[test]
fn unknown_suite_is_an_error_value() {
    let err = evaluate_suite("nope", &ExperimentConfig::default()).unwrap_err();
    assert!(matches!(err, Error::UnknownSuite(_)));
}
