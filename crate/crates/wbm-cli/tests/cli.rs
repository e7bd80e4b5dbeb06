use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn csv_rows(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',').map(|x| x.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn compute_square_surface_area() {
    let o = wbm(&["compute", "surface_area", "--measure", "lebesgue", "--body", "cube:1"]);
    assert!(o.status.success(), "{o:?}");
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 8.0).abs() < 1e-12);
    assert!(v["error_estimate"].as_f64().unwrap() >= 0.0);

    let cfg = configs().join("compute_square.toml");
    let o2 = wbm(&["--config", cfg.to_str().unwrap()]);
    assert!(o2.status.success(), "{o2:?}");
    assert_eq!(stdout(&o), stdout(&o2));
}

#[test]
fn compute_mixed_measure_of_disks() {
    // γ₂(B; B) = ∫ φ(u) du over the unit circle = e^{−1/2}.
    let o = wbm(&[
        "compute",
        "mixed_measure",
        "--measure",
        "gaussian",
        "--body",
        "ball:1",
        "--body",
        "ball:1",
    ]);
    assert!(o.status.success(), "{o:?}");
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - (-0.5f64).exp()).abs() < 1e-9);
    let bad = wbm(&["compute", "mixed_measure", "--body", "ball:1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_crosses_zero_at_unit_radius() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("sweep_gaussian_disk.toml");
    let o = wbm(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(text, stdout(&o));
    assert!(text.starts_with("radius,value,error\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 57);
    for &(r, v) in &rows {
        let want = (1.0 - r * r) * (-0.5 * r * r).exp();
        assert!((v - want).abs() < 1e-9, "R={r}: {v} vs {want}");
    }
    let crossing = rows.windows(2).find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0).unwrap();
    assert!(crossing[0].0 < 1.0 && crossing[1].0 >= 1.0 - 1e-12);
}

#[test]
fn sweep_kappa_ratio_over_dimension() {
    let o = wbm(&["sweep", "kappa_ratio", "--from", "2", "--to", "6", "--steps", "5"]);
    assert!(o.status.success(), "{o:?}");
    let rows = csv_rows(&stdout(&o));
    assert_eq!(
        rows.iter().map(|r| r.0).collect::<Vec<_>>(),
        vec![2.0, 3.0, 4.0, 5.0, 6.0]
    );
    assert!((rows[1].1 - 3.0 * std::f64::consts::PI / 8.0).abs() < 1e-14);
}

fn verify_args<'a>(out: &'a str, workers: &'a str) -> Vec<&'a str> {
    vec![
        "verify",
        "--inequality",
        "minkowski_first",
        "--measure",
        "gaussian",
        "--profile",
        "power",
        "--body",
        "symmetric_smooth_2d",
        "--count",
        "40",
        "--seed",
        "7",
        "--workers",
        workers,
        "--out",
        out,
    ]
}

#[test]
fn verify_is_deterministic_and_rerunnable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = wbm(&verify_args(a.path().to_str().unwrap(), "1"));
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("minkowski_first"));
    let o = wbm(&verify_args(b.path().to_str().unwrap(), "2"));
    assert!(o.status.success(), "{o:?}");
    let read = |d: &Path, f: &str| fs::read(d.join(f)).unwrap();
    assert_eq!(read(a.path(), "reports.jsonl"), read(b.path(), "reports.jsonl"));
    assert_eq!(read(a.path(), "summary.csv"), read(b.path(), "summary.csv"));
    let summary = String::from_utf8(read(a.path(), "summary.csv")).unwrap();
    assert!(summary.starts_with("inequality,count,min_slack,violations,inconclusive\n"));
    assert!(summary.lines().nth(1).unwrap().starts_with("minkowski_first,40,"));
    assert_eq!(summary.lines().nth(1).unwrap().split(',').nth(3), Some("0"));
    let jsonl = String::from_utf8(read(a.path(), "reports.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 40);

    // The saved configuration reproduces the run byte for byte.
    let c = tempfile::tempdir().unwrap();
    let saved = a.path().join("run_config.toml");
    let o = wbm(&["--config", saved.to_str().unwrap(), "--out", c.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(read(a.path(), "reports.jsonl"), read(c.path(), "reports.jsonl"));
}

#[test]
fn report_aggregates_and_flags_violations() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(wbm(&verify_args(d, "1")).status.success());
    let reports = dir.path().join("reports.jsonl");
    let o = wbm(&["report", reports.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("minkowski_first"));

    let first = fs::read_to_string(&reports)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let mut v: serde_json::Value = serde_json::from_str(&first).unwrap();
    v["verdict"] = "violated".into();
    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, format!("{v}\n")).unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = wbm(&[
        "report",
        reports.to_str().unwrap(),
        bad.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    let csv = fs::read_to_string(out.path().join("summary.csv")).unwrap();
    assert!(csv.contains("minkowski_first,41,"), "{csv}");
}

#[test]
fn errors_exit_with_status_two() {
    let o = wbm(&["verify", "--inequality", "no_such_inequality"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown inequality id"));

    // minkowski_first without a profile is rejected before running.
    let o = wbm(&["verify", "--inequality", "minkowski_first", "--count", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "command = \"verify\"\n\n[[suite]]\ninequality = \"minkowski_first\"\ncolour = 1\n",
    )
    .unwrap();
    let o = wbm(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5") && err.contains("colour"), "{err}");
}

#[test]
fn preset_file_parses() {
    let text = fs::read_to_string(configs().join("inequality_suites.toml")).unwrap();
    let cfg = wbm_cli::config::RunConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.suites.len(), 29);
    for s in &cfg.suites {
        s.validate().unwrap();
    }
}
