//! End-to-end tests of the installed binary: exit codes, report JSON,
//! schema rejection paths, and the environment tolerance override.

use dehn_bounds::parental::VerdictTag;
use dehn_bounds::records::ReportFile;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dehn-bounds"))
}

fn write_record(dir: &Path, name: &str, json: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const CHILD_QUIET: &str = r#"{
  "name": "child-quiet",
  "volume": 2.9,
  "cusps": [],
  "geodesicCutoff": 0.5,
  "geodesics": [0.2]
}"#;

fn parent_with_slope(volume: f64, length: f64, cutoff: f64) -> String {
    format!(
        r#"{{
  "name": "parent",
  "volume": {volume},
  "cusps": [
    {{
      "name": "c0",
      "area": 1.0,
      "slopeLengthCutoff": {cutoff},
      "slopes": [ {{ "name": "1/0", "length": {length} }} ]
    }}
  ],
  "geodesicCutoff": 0.5,
  "geodesics": []
}}"#
    )
}

#[test]
fn missing_file_exits_2() {
    let out = bin()
        .args([
            "test",
            "--parent",
            "/nonexistent/p.json",
            "--child",
            "/nonexistent/c.json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent/p.json"));
}

#[test]
fn schema_violation_exits_2_with_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_record(
        dir.path(),
        "bad.json",
        r#"{"name":"x","volume":-1,"cusps":[],"geodesicCutoff":1,"geodesics":[]}"#,
    );
    let child = write_record(dir.path(), "child.json", CHILD_QUIET);
    let out = bin()
        .args(["test", "--parent"])
        .arg(&bad)
        .arg("--child")
        .arg(&child)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/volume"), "{}", stderr(&out));
}

#[test]
fn missing_flag_is_usage_error() {
    let out = bin().args(["bounds"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn volume_excluded_pair_reports_tag() {
    let dir = tempfile::tempdir().unwrap();
    let parent = write_record(dir.path(), "p.json", &parent_with_slope(2.5, 9.0, 10.0));
    let child = write_record(dir.path(), "c.json", CHILD_QUIET);
    let out = bin()
        .args(["test", "--parent"])
        .arg(&parent)
        .arg("--child")
        .arg(&child)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = ReportFile::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.verdict.tag, VerdictTag::ExcludedByVolume);
}

#[test]
fn short_and_window_slope_yields_inconclusive_with_obligations() {
    let dir = tempfile::tempdir().unwrap();
    let parent = write_record(dir.path(), "p.json", &parent_with_slope(3.0, 7.0, 16.0));
    // geodesic spectrum complete only up to 0.01, below the ceiling, so
    // the window half of the long-slope regime stays live
    let child = write_record(
        dir.path(),
        "c.json",
        r#"{"name":"c","volume":2.9,"cusps":[],"geodesicCutoff":0.01,"geodesics":[]}"#,
    );
    let out = bin()
        .args(["test", "--parent"])
        .arg(&parent)
        .arg("--child")
        .arg(&child)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = ReportFile::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.verdict.tag, VerdictTag::Inconclusive);
    // the slope is a short candidate (7.0 < 7.5832) and its square 49
    // falls inside the window [45.63, 206.33]
    assert!(report
        .verdict
        .obligations
        .iter()
        .any(|o| o.contains("short-slope threshold")));
    assert!(
        report
            .verdict
            .obligations
            .iter()
            .any(|o| o.contains("49.000000") && o.contains("45.63")),
        "{:?}",
        report.verdict.obligations
    );
}

#[test]
fn quiet_pair_certifies_not_parent() {
    let dir = tempfile::tempdir().unwrap();
    // the only slope is outside both regimes (15^2 = 225 > 206.33), the
    // listing is complete past the window (15.5^2 = 240.25), and the
    // child's geodesics all clear the ceiling
    let parent = write_record(dir.path(), "p.json", &parent_with_slope(3.0, 15.0, 15.5));
    let child = write_record(dir.path(), "c.json", CHILD_QUIET);
    let out = bin()
        .args(["test", "--parent"])
        .arg(&parent)
        .arg("--child")
        .arg(&child)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = ReportFile::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.verdict.tag, VerdictTag::NotParentCertified);
    assert!(report.verdict.obligations.is_empty());
}

#[test]
fn out_flag_writes_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    let parent = write_record(dir.path(), "p.json", &parent_with_slope(3.0, 7.0, 16.0));
    let child = write_record(dir.path(), "c.json", CHILD_QUIET);
    let report_path = dir.path().join("report.json");
    let out = bin()
        .args(["test", "--parent"])
        .arg(&parent)
        .arg("--child")
        .arg(&child)
        .arg("--out")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let on_disk = std::fs::read_to_string(&report_path).unwrap();
    assert_eq!(on_disk, stdout(&out));
    let report = ReportFile::from_json(&on_disk).unwrap();
    assert_eq!(report.version, 1);
    assert_eq!(report.parent, "parent");
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let parent = write_record(dir.path(), "p.json", &parent_with_slope(3.0, 7.0, 16.0));
    let child = write_record(dir.path(), "c.json", CHILD_QUIET);
    let run = || {
        let out = bin()
            .args(["test", "--parent"])
            .arg(&parent)
            .arg("--child")
            .arg(&child)
            .output()
            .unwrap();
        stdout(&out)
    };
    assert_eq!(run(), run());
}

#[test]
fn composed_mode_flag_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let parent = write_record(dir.path(), "p.json", &parent_with_slope(3.0, 8.0, 16.0));
    let child = write_record(dir.path(), "c.json", CHILD_QUIET);
    let out = bin()
        .args(["test", "--mode", "composed", "--parent"])
        .arg(&parent)
        .arg("--child")
        .arg(&child)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = ReportFile::from_json(&stdout(&out)).unwrap();
    // 8^2 = 64 sits below the composed window's lower edge (~92.96), and
    // 8 exceeds the short threshold, so the composed screen certifies
    assert_eq!(report.verdict.tag, VerdictTag::NotParentCertified);
}

#[test]
fn verify_exit_codes() {
    let ok = bin().args(["verify", "--grid-n", "200"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("passed, 0 failed"));

    let bad = bin()
        .args(["verify", "--grid-n", "200", "--debug-k", "3.5"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL"));
    assert!(stdout(&bad).contains("short-slope-reproduction"));
}

#[test]
fn constants_output_published_values() {
    let out = bin().args(["constants"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("D = 0.848925"));
    assert!(text.contains("beta enclosure"));
}

#[test]
fn env_var_overrides_tolerance() {
    let ok = bin()
        .args(["constants"])
        .env("DEHN_BOUNDS_TOL", "1e-10")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("quadrature tolerance: 1e-10"));

    let bad = bin()
        .args(["constants"])
        .env("DEHN_BOUNDS_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));

    // explicit flag wins over the environment
    let flag = bin()
        .args(["constants", "--tol", "1e-9"])
        .env("DEHN_BOUNDS_TOL", "1e-10")
        .output()
        .unwrap();
    assert!(stdout(&flag).contains("quadrature tolerance: 1e-9"));
}
