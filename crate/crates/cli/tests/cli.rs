use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn occtime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_occtime")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// `(n, value)` columns of a CSV moment table.
fn value_column(csv: &str) -> Vec<(String, String)> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let n = header.iter().position(|h| *h == "n").unwrap();
    let v = header.iter().position(|h| *h == "value").unwrap();
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[n].to_string(), f[v].to_string())
        })
        .collect()
}

fn owned(rows: &[(&str, &str)]) -> Vec<(String, String)> {
    rows.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn bm_moments_are_central_binomial_ratios() {
    let o = occtime(&["moments", "--diffusion", "bm", "--n-max", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value_column(&stdout(&o)), owned(&[("1", "1/2"), ("2", "3/8"), ("3", "5/16")]));
}

#[test]
fn bessel_at_minus_half_reduces_to_bm() {
    let o = occtime(&["moments", "--diffusion", "bessel", "--nu", "-0.5", "--beta", "0.5", "--n-max", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let vals: Vec<f64> = value_column(&stdout(&o)).iter().map(|(_, v)| v.parse().unwrap()).collect();
    assert_eq!(vals, vec![0.5, 0.375]);

    let o = occtime(&["moments", "--diffusion", "bessel", "--nu", "-0.5", "--beta", "0.5", "--n-max", "2", "--exact"]);
    assert_eq!(value_column(&stdout(&o)), owned(&[("1", "1/2"), ("2", "3/8")]));

    let o = occtime(&[
        "moments", "--diffusion", "bessel", "--nu", "-1/2", "--beta", "1/2", "--n-max", "2", "--exact", "--method",
        "recursion",
    ]);
    assert_eq!(value_column(&stdout(&o)), owned(&[("1", "1/2"), ("2", "3/8")]));
}

#[test]
fn sticky_first_laplace_moment_is_h() {
    let o = occtime(&["moments", "--diffusion", "sticky", "--gamma", "1", "--lambda", "2", "--n-max", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = value_column(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].1.parse::<f64>().unwrap(), 0.25);
}

#[test]
fn generic_route_matches_closed_form() {
    let closed = occtime(&["moments", "--diffusion", "skew-bm", "--beta", "0.3", "--n-max", "3"]);
    let generic =
        occtime(&["moments", "--diffusion", "skew-bm", "--beta", "0.3", "--n-max", "3", "--method", "generic", "--lambda", "1.5"]);
    assert!(generic.status.success(), "{}", stderr(&generic));
    let a = value_column(&stdout(&closed));
    let b = value_column(&stdout(&generic));
    for ((_, x), (_, y)) in a.iter().zip(&b) {
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn validation_errors_exit_two_with_the_range() {
    let o = occtime(&["moments", "--diffusion", "skew-bm", "--beta", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("[0, 1]"), "{}", stderr(&o));

    let o = occtime(&["moments", "--diffusion", "bessel", "--nu", "-1.2", "--beta", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nu"), "{}", stderr(&o));

    let o = occtime(&["moments", "--diffusion", "bm", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("self-similar"));

    let o = occtime(&["moments", "--diffusion", "bm", "--beta", "0.3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = occtime(&["moments", "--diffusion", "sticky", "--gamma", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = occtime(&["moments", "--diffusion", "bm", "--n-max", "61"]);
    assert_eq!(o.status.code(), Some(2));

    let o = occtime(&["moments", "--diffusion", "wiener"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_inversion_exits_one() {
    let o = occtime(&["invert", "--gamma", "1", "--t", "1", "--order", "4", "--rel-tol", "0", "--abs-tol", "0"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"moments\"\ndiffusion = \"skew-bm\"\nbeta = \"3/10\"\nn_max = 2\nexact = true\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let o = occtime(&["--config", cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value_column(&stdout(&o)), owned(&[("1", "3/10"), ("2", "39/200")]));

    let o = occtime(&["moments", "--config", cfg, "--beta", "1/4", "--n-max", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value_column(&stdout(&o)), owned(&[("1", "1/4")]));

    let o = occtime(&["mgf", "--config", cfg]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_carries_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let o = occtime(&["moments", "--diffusion", "skew-bm", "--beta", "0.25", "--n-max", "2", "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["meta"]["command"], "moments");
    assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["meta"]["args"]["beta"], "0.25");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["rows"][0]["value"], 0.25);
}

// Same file name under per-run directories: the path is echoed into the output.
fn simulate_with_workers(dir: &Path, workers: &str) -> (String, String) {
    let run = dir.join(workers);
    std::fs::create_dir(&run).unwrap();
    let samples = Path::new("samples.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_occtime"))
        .current_dir(&run)
        .args([
            "--workers", workers, "simulate", "--diffusion", "skew-bm", "--beta", "0.7", "--paths", "500", "--seed",
            "9", "--step", "1e-4", "--samples", "samples.csv",
        ])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    (stdout(&o), std::fs::read_to_string(run.join(samples)).unwrap())
}

#[test]
fn simulation_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (out1, s1) = simulate_with_workers(dir.path(), "1");
    let (out3, s3) = simulate_with_workers(dir.path(), "3");
    assert_eq!(out1, out3);
    assert_eq!(s1, s3);
    assert!(s1.starts_with("path_id,a_t,b_t,zero_time,terminal\n"));
    assert_eq!(s1.lines().count(), 501);
}

#[test]
fn simulate_json_reports_ks() {
    let o = occtime(&[
        "simulate", "--diffusion", "bm", "--paths", "2000", "--step", "1e-4", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["ks"]["statistic"].as_f64().unwrap() < 0.05);
    assert_eq!(doc["rows"][0]["analytic"], 0.5);
    assert!(doc["rows"][0]["z"].as_f64().unwrap().abs() < 5.0);
}

#[test]
fn density_and_invert_tables() {
    let o = occtime(&["density", "--family", "skew-bm", "--beta", "0.5", "--x", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let f: Vec<f64> = line.split(',').take(3).map(|v| v.parse().unwrap()).collect();
    assert!((f[1] - 2.0 / std::f64::consts::PI).abs() < 1e-14);
    assert!((f[2] - 0.5).abs() < 1e-14);

    let o = occtime(&["invert", "--gamma", "1", "--n", "1", "--t", "1,2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("t,value,error_estimate"));
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn verify_subset_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = occtime(&["verify", "--only", "1,8", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 2);
    assert_eq!(doc["checks"][0]["status"], "pass");

    let o = occtime(&["verify", "--only", "12"]);
    assert_eq!(o.status.code(), Some(2));
}
