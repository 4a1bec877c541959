use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use glt_core::analysis::DistributionReport;

fn glt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn list_shows_registry() {
    let o = glt(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("fd_t1 | a(x)(2-2cos(theta)) | alpha=1"));
    assert!(s.contains("Ln | (a/c)(6-6cos)/(2+cos) | alpha=(n+1)^-2"));
    assert_eq!(s.lines().count(), 11);
}

#[test]
fn spectrum_of_laplacian() {
    let o = glt(&["spectrum", "--case", "fd_t1", "--coeff", "one", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("n,index,value\n"));
    let rows = csv_rows(&s);
    assert_eq!(rows.len(), 4);
    for (k, row) in rows.iter().enumerate() {
        let v: f64 = row[2].parse().unwrap();
        let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / 5.0).cos();
        assert!((v - exact).abs() < 1e-14, "{v} vs {exact}");
    }
}

#[test]
fn spectrum_blocks_per_n() {
    let o = glt(&["spectrum", "--case", "fe_t1:a=exp", "--n", "50,100"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.iter().filter(|r| r[0] == "50").count(), 50);
    assert_eq!(rows.iter().filter(|r| r[0] == "100").count(), 100);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(glt(&["spectrum", "--case", "fd_nope", "--n", "4"]).status.code(), Some(2));
    assert_eq!(glt(&["spectrum", "--case", "fd_t1", "--n", "8,4"]).status.code(), Some(2));
    assert_eq!(glt(&["spectrum", "--case", "fd_t1", "--coeff", "wobbly", "--n", "4"]).status.code(), Some(2));
    assert_eq!(glt(&["spectrum", "--case", "fd_t1:zz=1", "--n", "4"]).status.code(), Some(2));
    assert_eq!(glt(&["certify", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(glt(&["compare", "--case", "fd_t1", "--n", "10", "--r", "9"]).status.code(), Some(2));
    assert_eq!(glt(&["compare", "--case", "fd_t7", "--n", "20"]).status.code(), Some(2));
    assert_eq!(glt(&["bogus"]).status.code(), Some(2));
    let o = glt(&["spectrum", "--case", "fd_nope", "--n", "4"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("registered cases"));
}

#[test]
fn compare_writes_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.json");
    let o = glt(&[
        "compare", "--case", "fd_t1", "--coeff", "xexp", "--n", "50", "--r", "1000", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let overlay = std::fs::read_to_string(dir.path().join("fig_overlay.csv")).unwrap();
    assert!(overlay.starts_with("n,t,rearrangement,eigenvalue\n"));
    assert_eq!(csv_rows(&overlay).len(), 50);

    let json = std::fs::read_to_string(&out).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let first = value.as_array().unwrap()[0].to_string();
    let rep = DistributionReport::from_json_str(&first).unwrap();
    assert_eq!(rep.n, 50);
    assert!((rep.rearrangement_gap.unwrap() - 0.0327).abs() < 2e-3);
    assert_eq!(rep.functionals.len(), 4);
    for key in ["case", "n", "alpha_n", "mode", "backing", "spectrum", "functionals", "outliers"] {
        assert!(value[0].get(key).is_some(), "missing {key}");
    }
    no_temp_files(dir.path(), 2);
}

#[test]
fn compare_schur_degenerate_rho() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("schur.csv");
    let o = glt(&["compare", "--case", "schur:a=one,rho=0", "--n", "40", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), DistributionReport::CSV_HEADER);
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn compare_unbounded_with_window() {
    let o = glt(&["compare", "--case", "fd_t7:q=2", "--n", "40", "--mode", "sigma", "--window", "0,20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn coefficient_csv_and_seeded_random() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("a.csv");
    std::fs::write(&table, "x,value\n0,1\n1,1\n").unwrap();
    let spec = format!("csv:{}", table.display());
    let from_csv = glt(&["spectrum", "--case", "fd_t1", "--coeff", &spec, "--n", "6"]);
    let constant = glt(&["spectrum", "--case", "fd_t1", "--coeff", "one", "--n", "6"]);
    assert_eq!(stdout(&from_csv), stdout(&constant));

    let args = ["spectrum", "--case", "fe_t1", "--coeff", "random", "--seed", "11", "--n", "20"];
    assert_eq!(stdout(&glt(&args)), stdout(&glt(&args)));
    let other = glt(&["spectrum", "--case", "fe_t1", "--coeff", "random", "--seed", "12", "--n", "20"]);
    assert_ne!(stdout(&glt(&args)), stdout(&other));
    assert_eq!(glt(&["spectrum", "--case", "fe_t1", "--coeff", "random", "--n", "20"]).status.code(), Some(2));
}

#[test]
fn gap_table_reference_column() {
    let o = glt(&["table2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6);
    assert_eq!((rows[0][0].as_str(), rows[0][2].as_str()), ("50", "0.0327"));
    assert_eq!((rows[3][0].as_str(), rows[3][2].as_str()), ("400", "0.0042"));
    assert!(rows.iter().all(|r| r[4] == "true"));
}

#[test]
fn certify_families() {
    let o = glt(&["certify", "--family", "thm2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().count() > 10 && s.lines().all(|l| l.starts_with("PASS ")));

    let o = glt(&["certify", "--family", "fd_t4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));

    let o = glt(&["certify", "--family", "fe_t1", "--n", "20,40", "--m", "2,4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&o)).len(), 4);
}

fn no_temp_files(dir: &Path, expected: usize) {
    let names: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), expected, "{names:?}");
}
