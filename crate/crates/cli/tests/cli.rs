use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn iqa(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_iqa"));
    cmd.args(args)
        .env_remove("IQA_OUTPUT_DIR")
        .env_remove("IQA_WORKERS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("exp.cfg");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn validate_echoes_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scenario = fidelity-map\nN_list = 20\nT_list = 100\n",
    );
    let out = iqa(&["validate", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lambda_points = 201"));
    assert!(text.contains("steps_per_unit_time = 10.0"));
}

#[test]
fn validate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scenario = fidelity-map\nN_list = 20\nT_list = 100\nspeed = 3\n",
    );
    let out = iqa(&["validate", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("speed"));

    let out = iqa(&["validate", "--config", "/nonexistent/exp.cfg"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_tables_under_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scenario = adiabaticity\nN_list = 8\nl_list = 2\nT_list = 20\nlambda_points = 11\noutput_dir = ignored\n",
    );
    let out_dir = dir.path().join("out");
    let out = iqa(
        &["run", "--config", cfg.to_str().unwrap()],
        &[
            ("IQA_OUTPUT_DIR", &out_dir),
            ("IQA_WORKERS", Path::new("2")),
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(out_dir.join("adiabaticity/r_profile.csv")).unwrap();
    assert!(csv.starts_with("N,l,T,lambda,R\n"));
    assert_eq!(csv.lines().count(), 12);
    assert!(out_dir.join("adiabaticity/provenance.txt").exists());
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn oracle_shortcut() {
    let dir = tempfile::tempdir().unwrap();
    let out = iqa(
        &[
            "oracle",
            "--n",
            "4",
            "--output-dir",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("oracle-check/oracle_diff.csv").exists());

    let out = iqa(
        &[
            "oracle",
            "--n",
            "12",
            "--output-dir",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let out = iqa(&["run"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let out = iqa(&["validate", "--config", path.to_str().unwrap()], &[]);
        assert_eq!(out.status.code(), Some(0), "{}", path.display());
        seen += 1;
    }
    assert_eq!(seen, 8);
}
