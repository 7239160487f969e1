use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_akhiezer"));
    for (k, _) in std::env::vars() {
        if k.starts_with("AKHIEZER_") {
            c.env_remove(k);
        }
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(p: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(p).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect()
}

#[test]
fn apply_both_writes_deviation_table() {
    let d = TempDir::new().unwrap();
    let out = path(&d, "c.csv");
    let o = run(&["apply", "--transform", "C", "--method", "both", "--grid", "-20:20:1024", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,re1,im1,re2,im2\n"));
    let dev_file = path(&d, "c.deviation.csv");
    let dev = fs::read_to_string(&dev_file).unwrap();
    assert!(dev.starts_with("t,dev1,dev2\n"));
    let worst = rows(&dev_file).iter().map(|r| r[1].max(r[2])).fold(0.0f64, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn phi_then_psi_across_invocations() {
    let d = TempDir::new().unwrap();
    let x = path(&d, "x.csv");
    let y = path(&d, "y.csv");
    let z = path(&d, "z.csv");
    let n = 2048;
    let mut text = String::from("t,re1,im1,re2,im2\n");
    for k in 0..n {
        let t = -20.0 + 40.0 * k as f64 / (n - 1) as f64;
        let a = (1.0 / t.cosh()).powi(2);
        let b = (-(t - 1.0) * (t - 1.0)).exp();
        text.push_str(&format!("{t:.16e},{a:.16e},0,{:.16e},{b:.16e}\n", 0.5 * b));
    }
    fs::write(&x, text).unwrap();
    let o = run(&["apply", "--transform", "phi", "--input", s(&x), "--out", s(&y)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["apply", "--transform", "psi", "--input", s(&y), "--out", s(&z)])), 0);
    let (want, got) = (rows(&x), rows(&z));
    assert_eq!(want.len(), got.len());
    for (a, b) in want.iter().zip(&got) {
        assert!(a.iter().zip(b).all(|(u, v)| (u - v).abs() < 1e-6), "{a:?} {b:?}");
    }
    // the intermediate differs from the input
    assert!(rows(&y).iter().zip(&want).any(|(a, b)| (a[1] - b[1]).abs() > 1e-3));
}

#[test]
fn malformed_csv_exits_2_without_output() {
    let d = TempDir::new().unwrap();
    let bad = path(&d, "bad.csv");
    let out = path(&d, "out.csv");
    for content in [
        "t,re1,im1,re2,im2\n0,1,0,0,0\n1,abc,0,0,0\n",
        "t,re,im\n0,1,0\n1,1,0\n",
        "t,re1,im1,re2,im2\n0,1,0,0,0\n1,1,0,0,0\n3,1,0,0,0\n",
        "t,re1,im1,re2,im2\n0,1,0,0\n",
        "t,re1,im1,re2,im2\n0,1,0,0,0\n",
    ] {
        fs::write(&bad, content).unwrap();
        let o = run(&["apply", "--input", s(&bad), "--out", s(&out)]);
        assert_eq!(code(&o), 2, "{content:?}");
        assert!(!out.exists());
    }
    assert_eq!(code(&run(&["apply", "--input", s(&path(&d, "missing.csv")), "--out", s(&out)])), 2);
}

#[test]
fn bad_parameters_exit_2() {
    let d = TempDir::new().unwrap();
    let out = path(&d, "o.csv");
    for args in [
        vec!["apply", "--omega", "0"],
        vec!["apply", "--sigma", "1.5"],
        vec!["apply", "--grid", "1:0:10"],
        vec!["apply", "--grid", "0:1:1"],
        vec!["apply", "--grid", "nonsense"],
        vec!["apply", "--signal", "grown-bump", "--sigma", "0.5", "--growth", "0.7"],
        vec!["verify", "--tol", "no_such=1"],
        vec!["bench", "--sizes", "512,256"],
    ] {
        let mut a = args.clone();
        a.extend(["--out", s(&out)]);
        assert_eq!(code(&run(&a)), 2, "{args:?}");
        assert!(!out.exists(), "{args:?}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let d = TempDir::new().unwrap();
    let a = path(&d, "a.csv");
    let b = path(&d, "b.csv");
    for p in [&a, &b] {
        let o = run(&["apply", "--transform", "psi", "--signal", "bandlimited-noise", "--seed", "7", "--grid", "-10:10:300", "--out", s(p)]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn environment_overrides_flags_defaults() {
    let d = TempDir::new().unwrap();
    let a = path(&d, "a.csv");
    let o = bin()
        .args(["apply", "--transform", "C", "--out", s(&a)])
        .env("AKHIEZER_GRID", "-5:5:11")
        .env("AKHIEZER_OMEGA", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&a).len(), 11);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let d = TempDir::new().unwrap();
    let a = path(&d, "a.json");
    let b = path(&d, "b.json");
    let o = run(&["verify", "--trials", "10", "--out", s(&a)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&run(&["verify", "--trials", "10", "--out", s(&b)])), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    for key in ["\"name\"", "\"paper_ref\"", "\"value\"", "\"bound_or_target\"", "\"tolerance\"", "\"pass\""] {
        assert!(text.contains(key), "{key}");
    }
    assert!(text.contains("\"all_pass\": true"));
}

#[test]
fn verify_accepts_sigma_near_omega() {
    let d = TempDir::new().unwrap();
    let a = path(&d, "a.json");
    assert_eq!(code(&run(&["verify", "--trials", "5", "--sigma", "0.9", "--out", s(&a)])), 0);
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.contains("\"bound_reports\""));
    assert!(text.contains("\"all_pass\": true"));
}

#[test]
fn injected_fault_exits_1_and_names_check() {
    let d = TempDir::new().unwrap();
    let a = path(&d, "a.json");
    let o = bin()
        .args(["verify", "--trials", "5", "--out", s(&a)])
        .env("AKHIEZER_INJECT_FAULT", "corrupt_table")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("plan_table_unitarity"));
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.contains("\"all_pass\": false"));
}

#[test]
fn bench_handles_degenerate_size() {
    let o = run(&["bench", "--sizes", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("n,spectral_seconds,direct_seconds,max_deviation,status\n2,"));
}
