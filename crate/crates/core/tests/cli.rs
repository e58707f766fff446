use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SPEC: &str = r#"
[[set]]
name = "disk"
kind = "disk"
radius = 1.0

[[set]]
name = "segment"
kind = "segment"
a = -1
b = 1

[[set]]
name = "tangent"
kind = "tangent-disks"
expects = { lemma33 = "fail" }
"#;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potapprox"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sets.toml"), SPEC).unwrap();
    dir
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 2
}

#[test]
fn disk_boundary_mesh_has_512_rows() {
    let dir = setup();
    let res = format!("{}", 2.0 * std::f64::consts::PI / 512.0);
    let out = run(dir.path(), &["mesh", "--config", "sets.toml", "--set", "disk", "--resolution", &res, "--scales", "0.25,0.125,0.0625,0.03125"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(data_rows(&dir.path().join("out/disk-boundary.csv")), 512);
    let shells: Vec<_> = (0..4).map(|k| dir.path().join(format!("out/disk-shell-{k}.csv"))).collect();
    assert!(shells.iter().all(|p| p.exists()));
    assert!(!dir.path().join("out/disk-shell-4.csv").exists());
}

#[test]
fn missing_field_is_reported_with_its_line() {
    let dir = setup();
    fs::write(dir.path().join("bad.toml"), "[[set]]\nname = \"d\"\nkind = \"disk\"\n").unwrap();
    let out = run(dir.path(), &["mesh", "--config", "bad.toml"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("radius") && err.contains("line 1"), "{err}");
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = setup();
    let args = |o: &'static str| ["approx", "--config", "sets.toml", "--set", "disk,segment", "--degree", "10", "--out", o];
    assert!(run(dir.path(), &args("a")).status.success());
    assert!(run(dir.path(), &args("b")).status.success());
    let a = fs::read(dir.path().join("a/approx.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b/approx.csv")).unwrap());
    assert!(String::from_utf8_lossy(&a).lines().nth(1).unwrap().starts_with("schema_version,"));
    // the stored config round-trips
    let cfg = fs::read_to_string(dir.path().join("a/run.toml")).unwrap();
    let parsed = potapprox::cli::RunConfig::from_toml(&cfg).unwrap();
    assert_eq!(parsed.degree, Some(10));
}

#[test]
fn cache_hits_on_second_run() {
    let dir = setup();
    let args = ["cache", "--config", "sets.toml", "--set", "disk", "--degree", "100", "--cache", "nodes"];
    let first = String::from_utf8(run(dir.path(), &args).stdout).unwrap();
    let second = String::from_utf8(run(dir.path(), &args).stdout).unwrap();
    assert!(first.contains("Miss"), "{first}");
    assert!(second.contains("Hit"), "{second}");
    let files: Vec<_> = fs::read_dir(dir.path().join("nodes")).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn verify_exit_status_follows_expectations() {
    let dir = setup();
    let ok = run(dir.path(), &["verify", "lemma33", "--config", "sets.toml", "--set", "disk,segment"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    // a passing set declared as expected-fail is an unexpected pass
    let flipped = run(dir.path(), &["verify", "lemma33", "--config", "sets.toml", "--set", "disk", "--expect-fail"]);
    assert_eq!(flipped.status.code(), Some(1));
    let tangent = run(dir.path(), &["verify", "lemma33", "--config", "sets.toml", "--set", "tangent"]);
    assert_eq!(tangent.status.code(), Some(1));
    let report = fs::read_to_string(dir.path().join("out/verify-lemma33.csv")).unwrap();
    assert!(report.contains("unexpected"));

    let unknown = run(dir.path(), &["verify", "lemma99", "--config", "sets.toml"]);
    assert_eq!(unknown.status.code(), Some(2));
}
