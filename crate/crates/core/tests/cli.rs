use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_minkowski-iter");

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"))
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(BIN).args(args).arg("--out").arg(out).output().unwrap()
}

#[test]
fn iterate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("degree1.json");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["iterate", "--config", cfg.to_str().unwrap()], out);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (x, y) = (fs::read(a.join("trace.csv")).unwrap(), fs::read(b.join("trace.csv")).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    assert_eq!(fs::read(a.join("trace.json")).unwrap(), fs::read(b.join("trace.json")).unwrap());
}

#[test]
fn seed_changes_random_body() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("degree1.json");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&["iterate", "--config", cfg.to_str().unwrap(), "--seed", "1"], &a);
    run(&["iterate", "--config", cfg.to_str().unwrap(), "--seed", "2"], &b);
    assert_ne!(fs::read(a.join("trace.csv")).unwrap(), fs::read(b.join("trace.csv")).unwrap());
}

#[test]
fn edited_kernel_fails_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("edited_kernel.json");
    let o = run(&["multipliers", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("spectral_gap"));
}

#[test]
fn bad_config_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"format": 1, "no_such_field": 3}"#).unwrap();
    let o = run(&["iterate", "--config", cfg.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["iterate", "--grid", "12by3"], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["iterate", "--kmax", "60", "--grid", "40x80"], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn multipliers_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("ball_kernel.json");
    let o = run(&["multipliers", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("multipliers.csv")).unwrap();
    assert!(csv.starts_with("n,kernel,k,a_k,a_k_normalized"));
    assert!(dir.path().join("gap.csv").exists());
}
