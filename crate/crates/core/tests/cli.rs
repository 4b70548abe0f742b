mod common;

use std::path::{Path, PathBuf};

use common::fixtures_dir;
use globres::cli::run;
use tempfile::TempDir;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn globres(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("globres").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn fx(name: &str, file: &str) -> String {
    fixtures_dir().join(name).join(file).display().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let q = write(tmp.path(), "q.txt", "X1*X2");
    let corners = fx("four_corners", "system.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["--json", "residue", "--q", &q, "--sys", &corners],
        vec!["--json", "residue", "--q", &q, "--sys", &corners, "--method", "bm", "--radius", "3"],
        vec!["--json", "solve", "--sys", &corners],
        vec!["--json", "verify-vanishing", "--sys", &corners, "--delta", "2,2", "--scan", "--witness"],
        vec!["--json", "divide", "--q", &q, "--sys", &corners, "--delta", "2,2"],
        vec!["--json", "--seed", "3", "estimate-proper", "--sys", &corners, "--delta", "2,2", "--samples", "256"],
        vec!["--json", "cayley-bacharach", "--sys", &corners, "--bound", "1"],
    ];
    for args in runs {
        let a = globres(&args);
        let b = globres(&args);
        assert_eq!(a.code, b.code, "{args:?}");
        assert!(!a.stdout.is_empty(), "{args:?}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert!(v.get("seed").is_some(), "{args:?}");
    }
}

#[test]
fn seed_is_echoed() {
    let corners = fx("four_corners", "system.json");
    let out = globres(&["--json", "--seed", "17", "estimate-proper", "--sys", &corners, "--delta", "2,2", "--samples", "64"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["seed"], 17);
    let out = globres(&["--json", "check-jacobi", "--sys", &corners]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["seed"], 0);
}

#[test]
fn error_paths_exit_2_with_one_line() {
    let tmp = TempDir::new().unwrap();
    let corners = fx("four_corners", "system.json");
    let bad_json = write(tmp.path(), "bad.json", "{ not json");
    let bad_poly = write(tmp.path(), "q.txt", "X1 +* 2");
    let wrong_vars = write(tmp.path(), "q3.txt", "X3");
    let missing = tmp.path().join("missing.json").display().to_string();
    let laurent = fx("torus_linear", "system.json");
    let cases: Vec<(Vec<&str>, String)> = vec![
        (vec!["solve", "--sys", &missing], missing.clone()),
        (vec!["solve", "--sys", &bad_json], bad_json.clone()),
        (vec!["residue", "--q", &bad_poly, "--sys", &corners], bad_poly.clone()),
        (vec!["residue", "--q", &wrong_vars, "--sys", &corners], wrong_vars.clone()),
        (vec!["verify-vanishing", "--sys", &corners, "--delta", "2,x", "--scan"], "--delta".into()),
        (vec!["divide", "--q", &bad_poly, "--sys", &corners], bad_poly.clone()),
        (vec!["check-jacobi", "--sys", &laurent], laurent.clone()),
    ];
    for (args, needle) in cases {
        let o = globres(&args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.stderr);
        assert_eq!(o.stderr.trim_end().lines().count(), 1, "{args:?}: {}", o.stderr);
        assert!(o.stderr.starts_with("error: "), "{}", o.stderr);
        assert!(o.stderr.contains(&needle), "{args:?}: {}", o.stderr);
    }
    assert_eq!(globres(&["no-such-command"]).code, 2);
}

#[test]
fn membership_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let corners = fx("four_corners", "system.json");
    let member = write(tmp.path(), "in.txt", "X1^2*X2 - X2");
    let other = write(tmp.path(), "out.txt", "X1*X2");
    assert_eq!(globres(&["membership", "--q", &member, "--sys", &corners]).code, 0);
    assert_eq!(globres(&["membership", "--q", &other, "--sys", &corners]).code, 1);
}

#[test]
fn condition_exit_codes() {
    assert_eq!(globres(&["check-jacobi", "--sys", &fx("four_corners", "system.json")]).code, 0);
    assert_eq!(globres(&["check-jacobi", "--sys", &fx("example_2_1", "system.json")]).code, 1);
    assert_eq!(globres(&["check-bernstein", "--sys", &fx("torus_mv2", "system.json")]).code, 0);
}

#[test]
fn fixture_corpus_passes() {
    let dir = fixtures_dir().display().to_string();
    let o = globres(&["fixtures", "run", "--all", "--dir", &dir]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("0 failed"), "{}", o.stdout);
}

#[test]
fn fixture_failures_are_reported() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path().join("wrong");
    std::fs::create_dir(&d).unwrap();
    std::fs::copy(fixtures_dir().join("four_corners/system.json"), d.join("system.json")).unwrap();
    write(&d, "profile.json", r#"{"delta": ["2", "2"]}"#);
    write(
        &d,
        "expect.json",
        r#"{"checks": [{"check": "zero_count", "count": 5, "provenance": "trivial"}]}"#,
    );
    let o = globres(&["fixtures", "run", "--all", "--dir", &tmp.path().display().to_string()]);
    assert_eq!(o.code, 1, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("FAIL"), "{}", o.stdout);
}
