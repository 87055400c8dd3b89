//! End-to-end tests of the installed binary: grammar, output shapes, exit
//! codes, and the tolerance environment variable.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ritzspread"))
}

fn write_fixtures(dir: &Path) {
    let a = r#"{"kind": "hermitian", "rows": 4, "cols": 4,
        "data": [[[0,0],[0,0],[2,0],[0,0]],
                 [[0,0],[0,0],[0,0],[1,0]],
                 [[2,0],[0,0],[0,0],[0,0]],
                 [[0,0],[1,0],[0,0],[0,0]]]}"#;
    let x = r#"{"kind": "isometry", "rows": 4, "cols": 2,
        "data": [[[1,0],[0,0]],[[0,0],[1,0]],[[0,0],[0,0]],[[0,0],[0,0]]]}"#;
    // tilted plane at θ = π/6
    let (c, s) = (0.8660254037844387, 0.49999999999999994);
    let y = format!(
        r#"{{"kind": "isometry", "rows": 4, "cols": 2,
        "data": [[[{c},0],[0,0]],[[0,0],[{c},0]],[[{s},0],[0,0]],[[0,0],[{s},0]]]}}"#
    );
    std::fs::write(dir.join("a.json"), a).unwrap();
    std::fs::write(dir.join("x.json"), x).unwrap();
    std::fs::write(dir.join("y.json"), y).unwrap();
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn angles_formats_and_values() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());

    let out = bin()
        .current_dir(dir.path())
        .args(["angles", "--x", "x.json", "--y", "y.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let angles: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(angles.len(), 2);
    for a in &angles {
        assert!((a - std::f64::consts::FRAC_PI_6).abs() < 1e-10);
    }

    let out = bin()
        .current_dir(dir.path())
        .args(["angles", "--x", "x.json", "--y", "y.json", "--format", "json"])
        .output()
        .unwrap();
    let value = stdout_json(&out);
    assert_eq!(value["angles"].as_array().unwrap().len(), 2);

    let out = bin()
        .current_dir(dir.path())
        .args(["angles", "--x", "x.json", "--y", "y.json", "--format", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,angle\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn spread_and_decompose_shapes() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());

    let out = bin()
        .current_dir(dir.path())
        .args(["spread", "--a", "a.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let value = stdout_json(&out);
    let spread = value["spread"].as_array().unwrap();
    assert!((spread[0].as_f64().unwrap() - 4.0).abs() < 1e-10);
    assert!((spread[1].as_f64().unwrap() - 2.0).abs() < 1e-10);

    let out = bin()
        .current_dir(dir.path())
        .args(["decompose", "--x", "x.json", "--y", "y.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["s"], 0);
    assert_eq!(value["p"], 0);
    assert_eq!(value["r"], 2);
    assert_eq!(value["generic_dim"], 4);
    assert!(value["bases"]["s1"].as_array().unwrap().len() == 4);
}

#[test]
fn check_exit_codes_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());

    // passing theorem check: exit 0, schema keys present
    let out = bin()
        .current_dir(dir.path())
        .args(["check", "thm31", "--a", "a.json", "--x", "x.json", "--y", "y.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let value = stdout_json(&out);
    for key in [
        "check",
        "lhs",
        "rhs",
        "partial_sums_lhs",
        "partial_sums_rhs",
        "worst_margin",
        "holds",
        "ratio_profile",
        "tolerances",
        "inputs_digest",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    assert_eq!(value["check"], "thm31");
    assert_eq!(value["holds"], true);

    // unknown check name: usage error
    let out = bin()
        .current_dir(dir.path())
        .args(["check", "thm99", "--a", "a.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // missing required flag for this check: usage error
    let out = bin()
        .current_dir(dir.path())
        .args(["check", "thm31", "--a", "a.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // malformed file: usage error
    std::fs::write(dir.path().join("broken.json"), "{").unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["check", "lidskii", "--a", "broken.json", "--b", "a.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // thm32 on a non-invariant subspace: precondition violation = input error
    let out = bin()
        .current_dir(dir.path())
        .args(["check", "thm32", "--a", "a.json", "--x", "x.json", "--y", "y.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not invariant"), "stderr: {err}");
}

#[test]
fn lidskii_check_emits_both_forms() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = bin()
        .current_dir(dir.path())
        .args(["check", "lidskii", "--a", "a.json", "--b", "a.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let value = stdout_json(&out);
    let reports = value.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["check"], "lidskii-eigen");
    assert_eq!(reports[1]["check"], "lidskii-sv");
}

#[test]
fn tolerance_env_var_overrides_default() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());

    let out = bin()
        .current_dir(dir.path())
        .env("TOOL_TOL", "0.125")
        .args(["check", "ritz", "--a", "a.json", "--x", "x.json", "--y", "y.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["tolerances"]["submajorization"], 0.125);

    // invalid override is a usage error
    let out = bin()
        .current_dir(dir.path())
        .env("TOOL_TOL", "not-a-number")
        .args(["check", "ritz", "--a", "a.json", "--x", "x.json", "--y", "y.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn example_and_sweep_output() {
    let out = bin()
        .args(["example", "ex35", "--aval", "2", "--bval", "1", "--theta", "0.5235987755982988"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["example"], "ex35");
    assert!(value["closed_form_deviation"].as_f64().unwrap() <= 1e-10);

    // invalid parameters are usage errors
    let out = bin()
        .args(["example", "ex36", "--aval", "1", "--bval", "2", "--theta", "0.3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args([
            "sweep", "ex36", "--aval", "2", "--bval", "1", "--theta-min", "0.001",
            "--theta-max", "0.5", "--steps", "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("theta,ratio_0,ratio_1\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn fuzz_exit_codes_and_artifacts() {
    let dir = tempfile::tempdir().unwrap();

    // clean run: exit 0, stream on disk, no artifacts
    let out = bin()
        .current_dir(dir.path())
        .args([
            "fuzz", "--trials", "4", "--seed", "11", "--suite", "lidskii,offdiag",
            "--out", "report.jsonl",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stream = std::fs::read_to_string(dir.path().join("report.jsonl")).unwrap();
    assert_eq!(stream.lines().count(), 4);
    assert!(!dir.path().join("report.violations.jsonl").exists());
    assert!(dir.path().join("report.summary.csv").exists());

    // corrupted checker: exit 1 with a persisted artifact
    let out = bin()
        .current_dir(dir.path())
        .args([
            "fuzz", "--trials", "2", "--seed", "11", "--suite", "weyl-add",
            "--corrupt-check", "weyl-add", "--out", "bad.jsonl",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(dir.path().join("bad.violations.jsonl").exists());

    // bad suite name: usage error
    let out = bin()
        .current_dir(dir.path())
        .args(["fuzz", "--trials", "1", "--suite", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // zero trials: usage error
    let out = bin()
        .current_dir(dir.path())
        .args(["fuzz", "--trials", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
