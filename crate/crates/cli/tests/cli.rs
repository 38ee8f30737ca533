use std::process::{Command, Output};

fn jcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows (after the header row) split into cells.
fn rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let data = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, data)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (header, data) = rows(text);
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    data.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn header_value(text: &str, key: &str) -> Option<String> {
    let prefix = format!("# {key}=");
    text.lines().find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
}

#[test]
fn series_csv_layout_and_determinism() {
    let args = ["series", "--alpha", "4", "--t-end", "62.83", "--t-steps", "400"];
    let a = jcm(&args);
    assert!(a.status.success());
    let text = stdout(&a);
    assert_eq!(header_value(&text, "alpha").as_deref(), Some("4e0"));
    assert_eq!(header_value(&text, "t_steps").as_deref(), Some("400"));
    let (header, data) = rows(&text);
    assert_eq!(header, ["t", "sigma_z_series", "envelope"]);
    assert_eq!(data.len(), 401);
    assert!((column(&text, "sigma_z_series")[0] + 1.0).abs() < 1e-14);
    let b = jcm(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn vacuum_series_is_constant() {
    let o = jcm(&["series", "--alpha", "0", "--t-steps", "50"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(column(&text, "sigma_z_series").iter().all(|&v| v == -1.0));
    assert_eq!(rows(&text).0, ["t", "sigma_z_series"]);
}

#[test]
fn truncation_does_not_change_small_amplitude_series() {
    let a = stdout(&jcm(&["series", "--alpha", "2", "--n-max", "50", "--t-steps", "200"]));
    let b = stdout(&jcm(&["series", "--alpha", "2", "--n-max", "100", "--t-steps", "200"]));
    let (a, b) = (column(&a, "sigma_z_series"), column(&b, "sigma_z_series"));
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
}

#[test]
fn integrals_single_point_at_origin() {
    let o = jcm(&["integrals", "--t-end", "0", "--t-steps", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let sz = column(&text, "sigma_z_integral");
    assert_eq!(sz.len(), 1);
    assert!((sz[0] + 1.0).abs() < 1e-6);
    assert!(rows(&text).0.contains(&"cancellation".to_string()));
}

#[test]
fn detuned_integrals_report_plateau() {
    let o = jcm(&["integrals", "--delta-omega", "4", "--t-start", "6.3", "--t-end", "15.7", "--t-steps", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let c: f64 = header_value(&text, "const_plateau").unwrap().parse().unwrap();
    assert!((c + 0.2086).abs() < 5e-4);
    assert!(column(&text, "plateau").iter().all(|p| (p - c).abs() < 1e-2));
}

#[test]
fn standard_precision_failure_is_marked() {
    let o = jcm(&["integrals", "--precision", "standard", "--t-start", "24", "--t-end", "25", "--t-steps", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("# precision-loss")).count(), 3);
    let auto = jcm(&["integrals", "--precision", "auto", "--t-start", "24", "--t-end", "25", "--t-steps", "2"]);
    assert!(auto.status.success());
    let text = stdout(&auto);
    let (h, data) = rows(&text);
    let p = h.iter().position(|c| c == "precision").unwrap();
    assert!(data.iter().all(|r| r[p] == "extended"));
}

#[test]
fn thermal_limits() {
    let cold = stdout(&jcm(&["thermal", "--theta", "0", "--t-steps", "100"]));
    let series = stdout(&jcm(&["series", "--t-steps", "100"]));
    assert_eq!(column(&cold, "sigma_z_thermal"), column(&series, "sigma_z_series"));
    let flat = stdout(&jcm(&["thermal", "--gamma-tilde", "0", "--t-steps", "100"]));
    assert!(column(&flat, "P1").iter().all(|&v| v == 0.0));
    let (header, _) = rows(&flat);
    assert_eq!(header, ["t", "P1", "P2", "pg_thermal", "sigma_z_thermal"]);
}

#[test]
fn thermal_warning_keeps_exit_zero() {
    let o = jcm(&["thermal", "--theta", "0.3", "--t-steps", "10"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(header_value(&stdout(&o), "warning").is_some());
}

#[test]
fn thermal_integral_mode_matches_series() {
    let s = stdout(&jcm(&["thermal", "--t-end", "6", "--t-steps", "12"]));
    let i = stdout(&jcm(&["thermal", "--mode", "integral", "--t-end", "6", "--t-steps", "12"]));
    for col in ["P1", "P2"] {
        let d = column(&s, col)
            .iter()
            .zip(column(&i, col))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(d < 1e-4, "{col}: {d}");
    }
}

#[test]
fn check_passes_by_default() {
    let o = jcm(&["check", "--t-steps", "80"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.contains("collapse residual"));
}

#[test]
fn coarse_grid_makes_check_fail() {
    let o = jcm(&["check", "--dx", "0.5", "--t-end", "12.566370614359172", "--t-steps", "50"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("FAIL collapse residual")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(jcm(&["series", "--t-start", "2", "--t-end", "1"]).status.code(), Some(2));
    assert_eq!(jcm(&["series", "--t-steps", "0"]).status.code(), Some(2));
    assert_eq!(jcm(&["series", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(jcm(&["series", "--n-max", "10"]).status.code(), Some(2));
    assert_eq!(jcm(&["integrals", "--alpha", "0", "--t-steps", "2"]).status.code(), Some(2));
    assert_eq!(jcm(&["thermal", "--theta", "0.1", "--beta-epsilon", "8"]).status.code(), Some(2));
    assert_eq!(jcm(&["series", "--out", "/nonexistent-dir/x.csv"]).status.code(), Some(2));
}

#[test]
fn config_file_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "alpha = 2.0\nt_steps = 7\nt_end = 3.0\n").unwrap();
    let out = dir.path().join("data.csv");
    let o = jcm(&[
        "series",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(header_value(&text, "alpha").as_deref(), Some("3e0"));
    assert_eq!(header_value(&text, "t_end").as_deref(), Some("3e0"));
    assert_eq!(rows(&text).1.len(), 8);
    std::fs::write(&cfg, "alpha = \"four\"\n").unwrap();
    assert_eq!(jcm(&["series", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn jobs_flag_does_not_change_output() {
    let a = jcm(&["series", "--t-steps", "300", "--jobs", "1"]);
    let b = jcm(&["series", "--t-steps", "300", "--jobs", "3"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}
