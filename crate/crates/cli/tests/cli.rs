use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mddm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mddm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(str::to_owned)
        .collect()
}

#[test]
fn run_writes_one_row_per_seed_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = mddm(&["run", "--stream", "sine1", "--detector", "mddm-a", "--runs", "3", "--length", "30000", "--out", arg(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("MDDM-A"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(data_lines(&a).len(), 3);
    assert_eq!(data_lines(&dir.path().join("a_aggregate.csv")).len(), 1);
}

#[test]
fn matrix_covers_every_combination() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = mddm(&[
        "matrix", "--stream", "sine1,mixed", "--detector", "mddm-a,mddm-g,ddm,none",
        "--runs", "1", "--length", "25000", "--out", arg(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_lines(&dir.path().join("m_aggregate.csv")).len(), 8);
}

#[test]
fn a_bad_detector_fails_alone() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = mddm(&[
        "matrix", "--stream", "sine1", "--detector", "ddm,bogus", "--runs", "1",
        "--length", "25000", "--out", arg(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
    assert_eq!(data_lines(&dir.path().join("m_aggregate.csv")).len(), 1);
}

#[test]
fn run_rejects_more_than_one_cell() {
    let o = mddm(&["run", "--stream", "sine1,mixed", "--detector", "ddm", "--runs", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_matrix_succeeds() {
    let o = mddm(&["matrix"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invalid_parameter_values_are_usage_errors() {
    for args in [
        ["--runs", "0"],
        ["--noise", "1.5"],
        ["--delta", "2"],
    ] {
        let mut full = vec!["run", "--stream", "sine1", "--detector", "mddm-a", "--length", "1000"];
        full.extend(args);
        let o = mddm(&full);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn missing_csv_is_a_data_error() {
    let o = mddm(&["run", "--stream", "/nonexistent/stream.csv", "--detector", "ddm"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn dump_writes_led_with_all_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("led.csv");
    let o = mddm(&["dump", "--stream", "led", "--length", "500", "--out", arg(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 501);
    assert!(text.lines().all(|l| l.split(',').count() == 25));
}

#[test]
fn csv_stream_without_detector_has_no_alarms() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("sine.csv");
    let out = dir.path().join("r.csv");
    let o = mddm(&["dump", "--stream", "sine1", "--length", "3000", "--out", arg(&stream)]);
    assert!(o.status.success());
    let o = mddm(&["run", "--stream", arg(&stream), "--detector", "none", "--out", arg(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 1);
    let header = fs::read_to_string(&out).unwrap().lines().next().unwrap().to_owned();
    let alarms = header.split(',').position(|c| c == "alarm_count").unwrap();
    assert_eq!(rows[0].split(',').nth(alarms), Some("0"));
}

#[test]
fn config_file_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.cfg");
    let out = dir.path().join("s.csv");
    fs::write(&config, "stream = sine1\ndetector = mddm-a, fhddm\nruns = 1\nlength = 25000\n").unwrap();
    let o = mddm(&["matrix", "--config", arg(&config), "--set", "delta=1e-6|1e-3", "--out", arg(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let agg = data_lines(&dir.path().join("s_aggregate.csv"));
    assert_eq!(agg.len(), 4);
    assert!(agg.iter().any(|l| l.contains("delta=0.001")), "{agg:?}");
}
