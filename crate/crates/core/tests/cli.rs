use std::path::Path;
use std::process::{Command, Output};

use bvtn::algebra::expand;
use bvtn::{compute_bd, validate_nodes, BasisDegree};

fn bvtn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvtn"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bd_prints_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = write(dir.path(), "nodes.txt", "0.25 0.5\n");
    let o = bvtn(&["bd", "--nodes", &nodes, "--degree", "1"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "0.75 0.3333333333333333\n0.6666666666666666 0.3333333333333333\n"
    );
}

#[test]
fn solve_partition_of_unity() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = write(dir.path(), "nodes.txt", "0.25 0.5");
    let o = bvtn(&["solve", "--nodes", &nodes, "--degree", "1", "--rhs", "1 1"]);
    assert!(o.status.success());
    let x: Vec<f64> = stdout(&o)
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(x.len(), 2);
    assert!(x.iter().all(|v| (v - 1.0).abs() <= 4.0 * f64::EPSILON));

    let rhs = write(dir.path(), "rhs.txt", "0\n1\n");
    let o = bvtn(&["solve", "--nodes", &nodes, "--degree", "1", "--rhs", &rhs]);
    assert_eq!(stdout(&o), "-1 3\n");
}

#[test]
fn json_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let raw = "0.013 0.1 1/7 0.31 0.5 0.77 0.9";
    let nodes = write(dir.path(), "nodes.txt", raw);
    let o = bvtn(&["bd", "--nodes", &nodes, "--degree", "5", "--format", "json"]);
    assert!(o.status.success());
    let bd_file = write(dir.path(), "bd.json", &stdout(&o));
    let o = bvtn(&["expand", "--bd", &bd_file, "--format", "json"]);
    assert!(o.status.success());
    let got: bvtn::DenseMatrix = serde_json::from_str(&stdout(&o)).unwrap();

    let x = validate_nodes(&[0.013, 0.1, 1.0 / 7.0, 0.31, 0.5, 0.77, 0.9]).unwrap();
    let want = expand(&compute_bd(&x, BasisDegree::new(5, &x).unwrap()).unwrap());
    assert_eq!(got.rows(), want.rows());
    for (a, b) in got.as_slice().iter().zip(want.as_slice()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn spectra_report_achieved_bits() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = write(dir.path(), "nodes.txt", "0.25 0.5");
    let text = stdout(&bvtn(&["eig", "--nodes", &nodes, "--degree", "1"]));
    assert_eq!(text.lines().next(), Some("1"));
    assert!(text.contains("achieved_bits = "));
    let o = bvtn(&[
        "svd", "--nodes", &nodes, "--degree", "1", "--format", "json",
    ]);
    let s: bvtn::Spectrum = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s.values.len(), 2);
    assert!(s.achieved_bits >= 106 && s.stabilized);
}

#[test]
fn qr_and_lsq_formats() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = write(dir.path(), "nodes.txt", "1/4\n1/2\n3/4\n");
    let o = bvtn(&[
        "lsq", "--nodes", &nodes, "--degree", "1", "--rhs", "1 0 0", "--format", "json",
    ]);
    let sol: bvtn::LsqSolution = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((sol.coefficients[0] - 4.0 / 3.0).abs() < 1e-14);
    assert!((sol.residual_norm - (1.0f64 / 6.0).sqrt()).abs() < 1e-14);
    let csv = stdout(&bvtn(&[
        "lsq", "--nodes", &nodes, "--degree", "1", "--rhs", "1 0 0", "--format", "csv",
    ]));
    assert!(csv.starts_with("quantity,index,value\nc,0,"));
    let qr = stdout(&bvtn(&[
        "qr", "--nodes", &nodes, "--degree", "1", "--format", "csv",
    ]));
    assert_eq!(qr.lines().count(), 1 + 9 + 4);
}

#[test]
fn precision_flags_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = write(dir.path(), "nodes.txt", "0.25 0.5");
    let o = bvtn(&[
        "eig",
        "--nodes",
        &nodes,
        "--degree",
        "1",
        "--start-bits",
        "64",
        "--max-bits",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no stabilization up to 64 bits"));

    let o = Command::new(env!("CARGO_BIN_EXE_bvtn"))
        .args([
            "eig",
            "--nodes",
            &nodes,
            "--degree",
            "1",
            "--start-bits",
            "64",
        ])
        .env("BVTN_MAX_BITS", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));

    let o = bvtn(&["eig", "--nodes", &nodes, "--degree", "1", "--rtol", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.txt", "0.25 0.5");
    let unordered = write(dir.path(), "unordered.txt", "0.5 0.25");
    let garbage = write(dir.path(), "garbage.txt", "0.25 zero");
    assert_eq!(
        bvtn(&["bd", "--nodes", &unordered, "--degree", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bvtn(&["bd", "--nodes", &good, "--degree", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bvtn(&["bd", "--nodes", &garbage, "--degree", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bvtn(&["bd", "--nodes", "/nonexistent/nodes", "--degree", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bvtn(&["solve", "--nodes", &good, "--degree", "1", "--rhs", "1 x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bvtn(&["solve", "--nodes", &good, "--degree", "1", "--rhs", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bvtn(&["bogus"]).status.code(), Some(2));
}

#[test]
fn repro_csv_is_deterministic() {
    let a = bvtn(&["repro", "example5.1", "--format", "csv"]);
    let b = bvtn(&["repro", "example5.1", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_ref,mm_rel_err,baseline_rel_err"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r[1] <= 5e-15));

    let s = stdout(&bvtn(&["repro", "example5.2", "--format", "csv"]));
    assert!(s.starts_with("sigma_ref,mm_rel_err,baseline_rel_err\n"));
    assert_eq!(s.lines().count(), 17);
}

#[test]
fn repro_text_uses_two_digits() {
    let text = stdout(&bvtn(&["repro", "example5.2"]));
    assert!(text.contains("kappa2 = 5.3e+08"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("3.0e-09")));
}
