//! End-to-end tests of the `fsforms` binary: exit codes, output formats,
//! and the suite-directory override.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fsforms"))
}

#[test]
fn verify_passes_on_a_builtin_suite_with_every_format() {
    for format in ["text", "json", "csv"] {
        let out = bin()
            .args(["verify", "ym-core", "--format", format])
            .output()
            .unwrap();
        assert!(out.status.success(), "format {format}: {out:?}");
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("ym-core"), "format {format}: {stdout}");
    }
}

#[test]
fn verify_rejects_an_unknown_suite_with_exit_2() {
    let out = bin().args(["verify", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("unknown suite"), "{stderr}");
}

#[test]
fn verify_reports_failures_from_an_overridden_suite_dir_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("broken.txt"),
        "case wrong\nmode exact\nlhs delta(A)\nrhs 0\n",
    )
    .unwrap();
    let out = bin()
        .env("FSFORMS_SUITE_DIR", dir.path())
        .args(["verify", "broken", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("broken,wrong,fail"), "{stdout}");
}

#[test]
fn verify_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bin()
        .args(["verify", "brst", "--format", "json", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["suite"], "brst");
}

#[test]
fn lattice_runs_a_small_experiment_and_honors_overrides() {
    let out = bin()
        .args([
            "lattice",
            "projectors",
            "--sites",
            "48",
            "--seed",
            "7",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let parsed: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed["suite"], "projectors");
    assert_eq!(parsed["seed"], 7);
}

#[test]
fn lattice_rejects_unknown_experiment_and_bad_config() {
    let out = bin().args(["lattice", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\"sites\": \"many\"}").unwrap();
    let out = bin()
        .args(["lattice", "projectors", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_accepts_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.json");
    std::fs::write(&cfg, "{\"seed\": 11, \"sites\": 48, \"boundary\": \"fixed\"}").unwrap();
    let out = bin()
        .args(["lattice", "projectors", "--format", "json", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let parsed: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed["seed"], 11);
}

#[test]
fn list_names_suites_experiments_and_generators() {
    let out = bin().args(["list"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for needle in [
        "ym-core", "ym-corner", "brst", "aux-b2", "projectors", "equivariance", "curvature",
        "corner", "gribov",
    ] {
        assert!(stdout.contains(needle), "missing {needle}: {stdout}");
    }
    assert!(stdout.contains("A (f=0, s=1)"), "{stdout}");
    assert!(stdout.contains("w (f=1, s=0)"), "{stdout}");
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let run = || {
        let out = bin()
            .args(["lattice", "curvature", "--sites", "16", "--format", "csv"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run(), run());
}
