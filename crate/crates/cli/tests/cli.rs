use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn unimod(args: &[&str]) -> Output {
    unimod_with_catalog(args, None)
}

fn unimod_with_catalog(args: &[&str], catalog: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_unimod"));
    cmd.args(args).env_remove("LATTICE_CATALOG");
    if let Some(dir) = catalog {
        cmd.env("LATTICE_CATALOG", dir);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn shipped_catalog() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

#[test]
fn minima_of_e8() {
    let o = unimod(&["minima", "catalog:e8", "--count", "8"]);
    assert_eq!(code(&o), 0);
    assert!(o.stderr.is_empty());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.split_whitespace().next().is_some_and(|t| t.parse::<usize>().is_ok())).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.split_whitespace().nth(1) == Some("2")));
}

#[test]
fn json_reports_carry_a_version() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = unimod(&["--json", out.to_str().unwrap(), "minima", "identity:4", "--count", "4"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["minima_squared"].as_array().unwrap().len(), 4);
}

#[test]
fn complement_of_the_e8_witness() {
    let dir = tempfile::tempdir().unwrap();
    let gram = dir.path().join("g.json");
    let o = unimod(&["complement", "--p", "8", "--q", "1", "--vector", "1,1,1,1,1,1,1,1,3", "--gram", gram.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("rank 8"));
    assert!(text.contains("parity Even"));
    let back = unimod(&["minima", gram.to_str().unwrap()]);
    assert_eq!(code(&back), 0);
    assert!(stdout(&back).contains('2'));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&unimod(&["minima", "/nonexistent/form.json"])), 2);
    assert_eq!(code(&unimod(&["complement", "--p", "2", "--q", "1", "--vector", "2,2,2"])), 4);
    assert_eq!(code(&unimod(&["complement", "--p", "2", "--q", "1", "--vector", "0,0,0"])), 4);
    assert_eq!(code(&unimod(&["pipeline", "catalog:e8", "--mode", "quadext"])), 1);
    assert_eq!(code(&unimod(&["--budget", "1000", "pipeline", "catalog:leech"])), 5);
    assert_eq!(code(&unimod(&["minima", "catalog:e8", "--count", "9"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("indefinite.json");
    std::fs::write(&f, r#"{"format_version":1,"dim":2,"gram":[["1","0"],["0","-1"]]}"#).unwrap();
    let o = unimod(&["minima", f.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn pipeline_and_verification_succeed() {
    let o = unimod(&["pipeline", "catalog:e8"]);
    assert_eq!(code(&o), 0);
    assert!(o.stderr.is_empty());
    assert!(stdout(&o).contains("target met       true"));
    for target in ["e8", "sr-identity", "planar", "orbit"] {
        let o = unimod(&["verify", target]);
        assert_eq!(code(&o), 0, "{target}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = unimod(&["--json", out.to_str().unwrap(), "--workers", "3", "pipeline", "catalog:e8"]);
        assert_eq!(code(&o), 0);
        (o.stdout, std::fs::read(out).unwrap())
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn catalog_override_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(shipped_catalog()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let o = unimod_with_catalog(&["minima", "catalog:e8"], Some(dir.path()));
    assert_eq!(code(&o), 0);

    let path = dir.path().join("e8.json");
    let text = std::fs::read_to_string(&path).unwrap().replacen("\"2/1\"", "\"3/1\"", 1);
    std::fs::write(&path, text).unwrap();
    let o = unimod_with_catalog(&["minima", "catalog:e8"], Some(dir.path()));
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("hash"));
}
