use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use std::f64::consts::FRAC_1_SQRT_2 as INV_SQRT2;
const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn triwalk(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_triwalk")).args(args).output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn config(dir: &TempDir, name: &str, json: Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&json).unwrap()).unwrap();
    path
}

fn walk(family: &str, parameter: f64, g: [f64; 3], steps: usize) -> Value {
    serde_json::json!({
        "family": family,
        "parameter": parameter,
        "initial_basis": "eigen",
        "initial_amplitudes": g.map(|x| [x, 0.0]),
        "steps": steps,
    })
}

fn run_ok(cmd: &str, cfg: &Path, extra: &[&str]) -> String {
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    let r = triwalk(&args);
    assert_eq!(r.code, 0, "{cmd} failed: {}", r.stderr);
    r.stdout
}

/// Data rows of a CSV as (key, value) pairs; comment lines are skipped.
fn rows(csv: &str) -> Vec<(f64, f64)> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

fn probabilities(csv: &str) -> std::collections::HashMap<i64, f64> {
    rows(csv).into_iter().map(|(m, p)| (m as i64, p)).collect()
}

#[test]
fn zero_steps_is_a_point_mass() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("rho", 0.5, [0.0, 1.0, 0.0], 0));
    assert_eq!(run_ok("simulate", &cfg, &[]), "m,probability\n0,1.0\n");
    let mut standard = walk("phi", 0.3, [0.0, 1.0, 0.0], 0);
    standard["initial_basis"] = "standard".into();
    let cfg = config(&dir, "s.json", standard);
    assert_eq!(run_ok("simulate", &cfg, &[]), "m,probability\n0,1.0\n");
}

#[test]
fn simulated_rows_sum_to_one() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("phi", 0.9, [0.6, 0.0, 0.8], 300));
    let csv = run_ok("simulate", &cfg, &[]);
    let p = rows(&csv);
    assert_eq!(p.len(), 601);
    assert!((p.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn out_of_range_parameter_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("rho", 1.0, [1.0, 0.0, 0.0], 10));
    let r = triwalk(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.to_lowercase().contains("range"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn malformed_configs_exit_2() {
    let dir = TempDir::new().unwrap();
    let mut unknown = walk("rho", 0.5, [1.0, 0.0, 0.0], 10);
    unknown["colour"] = "blue".into();
    let bad_norm = walk("rho", 0.5, [1.0, 0.1, 0.0], 10);
    for (name, json) in [("u.json", unknown), ("n.json", bad_norm)] {
        let cfg = config(&dir, name, json);
        let r = triwalk(&["simulate", "--config", cfg.to_str().unwrap()]);
        assert_eq!(r.code, 2, "{name}: {}", r.stderr);
    }
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"family\": \"rho\",\n \"parameter\": }").unwrap();
    let r = triwalk(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
}

#[test]
fn slightly_denormalized_state_warns() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("rho", 0.5, [1.0 + 2e-7, 0.0, 0.0], 3));
    let r = triwalk(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning"), "{}", r.stderr);
    let p = rows(&r.stdout);
    assert!((p.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn edge_peaks_vanish_for_sigma_plus() {
    let dir = TempDir::new().unwrap();
    let edge_band = |p: &std::collections::HashMap<i64, f64>| {
        (67..=75).flat_map(|m| [p[&m], p[&-m]]).fold(0.0, f64::max)
    };
    let off_centre = |p: &std::collections::HashMap<i64, f64>| {
        p.iter().filter(|(m, _)| m.abs() > 20).map(|(_, &v)| v).fold(0.0, f64::max)
    };
    let cfg = config(&dir, "plus.json", walk("rho", 0.7, [1.0, 0.0, 0.0], 100));
    let plus = probabilities(&run_ok("simulate", &cfg, &[]));
    assert!(edge_band(&plus) < off_centre(&plus));
    let cfg = config(&dir, "minus.json", walk("rho", 0.7, [0.0, 1.0, 0.0], 100));
    let minus = probabilities(&run_ok("simulate", &cfg, &[]));
    assert_eq!(edge_band(&minus), off_centre(&minus));
}

#[test]
fn density_vanishes_at_origin_for_sigma2_minus() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("rho", 0.6, [0.0, 0.0, 1.0], 10));
    let w = rows(&run_ok("density", &cfg, &["--grid", "201"]));
    assert_eq!(w.len(), 201);
    let (v, w0) = w[100];
    assert!(v.abs() < 1e-15);
    assert!(w0.abs() < 1e-14);
    assert!(w.iter().all(|&(v, _)| v.abs() < 0.6));
}

#[test]
fn grover_density_files_agree() {
    let dir = TempDir::new().unwrap();
    let g = [0.48, 0.6, 0.64];
    let phi = config(&dir, "phi.json", walk("phi", 0.0, g, 10));
    let rho = config(&dir, "rho.json", walk("rho", INV_SQRT3, g, 10));
    let a = rows(&run_ok("density", &phi, &["--grid", "99"]));
    let b = rows(&run_ok("density", &rho, &["--grid", "99"]));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x.0 - y.0).abs() < 1e-10 && (x.1 - y.1).abs() < 1e-10, "{x:?} vs {y:?}");
    }
}

#[test]
fn rescaled_density_covers_the_light_cone() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("phi", 0.5, [0.6, 0.8, 0.0], 10));
    let csv = run_ok("density", &cfg, &["--rescale", "50"]);
    assert!(csv.starts_with("m,prediction\n"));
    assert_eq!(rows(&csv).len(), 101);
}

#[test]
fn small_grid_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("rho", 0.6, [1.0, 0.0, 0.0], 10));
    let r = triwalk(&["density", "--config", cfg.to_str().unwrap(), "--grid", "1"]);
    assert_eq!(r.code, 2);
}

#[test]
fn one_sided_localization_profile() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("rho", INV_SQRT3, [INV_SQRT2, 0.0, INV_SQRT2], 10));
    let csv = run_ok("localization", &cfg, &["--m-max", "30"]);
    let p = rows(&csv);
    assert_eq!(p.len(), 61);
    assert!(p.iter().filter(|r| r.0 < 0.0).all(|r| r.1 == 0.0));
    assert!((p[30].1 - 0.252_551).abs() < 1e-6);
    let footer = csv.lines().last().unwrap();
    let total: f64 = footer.strip_prefix("# total=").unwrap().parse().unwrap();
    // the profile decays as (5−2√6)^{2m}; beyond m = 30 the tail is far below 1e−12
    let sum: f64 = p.iter().map(|r| r.1).sum();
    assert!((total - sum).abs() < 1e-12, "{total} vs {sum}");
}

#[test]
fn gamma1_minus_has_no_localization() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("phi", 0.8, [0.0, 1.0, 0.0], 10));
    let csv = run_ok("localization", &cfg, &[]);
    assert!(rows(&csv).iter().all(|r| r.1 == 0.0));
    assert_eq!(csv.lines().last().unwrap(), "# total=0.0");
}

fn moments(cfg: &Path, orders: &str) -> Vec<Value> {
    let report: Value = serde_json::from_str(&run_ok("moments", cfg, &["--orders", orders])).unwrap();
    report["moments"].as_array().unwrap().clone()
}

#[test]
fn moment_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "sym.json", walk("phi", 0.9, [0.6, 0.8, 0.0], 50));
    let m = moments(&cfg, "1");
    assert_eq!(m[0]["asymptotic"].as_f64().unwrap(), 0.0);

    let cfg = config(&dir, "rho.json", walk("rho", 0.5, [1.0, 0.0, 0.0], 2000));
    let m = moments(&cfg, "2");
    let asy = m[0]["asymptotic"].as_f64().unwrap();
    assert!((asy - 0.031_09).abs() < 1e-5, "{asy}");
    assert!(m[0]["gap"].as_f64().unwrap() < 2e-3);

    let cfg = config(&dir, "phi.json", walk("phi", 0.0, [1.0, 0.0, 0.0], 100));
    let m = moments(&cfg, "2,4");
    assert_eq!(m.len(), 2);
    assert!((m[0]["asymptotic"].as_f64().unwrap() - 0.041_24).abs() < 1e-5);
}

fn compare(cfg: &Path) -> Value {
    serde_json::from_str(&run_ok("compare", cfg, &[])).unwrap()
}

#[test]
fn compare_gap_shrinks_with_time() {
    let dir = TempDir::new().unwrap();
    for (family, parameter, g) in [("rho", 0.6, [0.48, 0.6, 0.64]), ("phi", 0.7, [0.6, 0.0, 0.8])] {
        let short = compare(&config(&dir, "a.json", walk(family, parameter, g, 100)));
        let long = compare(&config(&dir, "b.json", walk(family, parameter, g, 400)));
        for r in [&short, &long] {
            assert!(r["normalization_deviation"].as_f64().unwrap() <= 1e-8);
            assert!(r["normalization_deviation_quadrature"].as_f64().unwrap() <= 1e-8);
        }
        let (a, b) = (short["interior_sup_gap"].as_f64().unwrap(), long["interior_sup_gap"].as_f64().unwrap());
        assert!(b < a, "{family}: {a} -> {b}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", walk("phi", 1.1, [0.6, 0.0, 0.8], 200));
    for cmd in ["simulate", "density", "localization", "moments", "compare"] {
        let a = dir.path().join(format!("{cmd}1.out"));
        let b = dir.path().join(format!("{cmd}2.out"));
        run_ok(cmd, &cfg, &["--out", a.to_str().unwrap()]);
        run_ok(cmd, &cfg, &["--out", b.to_str().unwrap()]);
        let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert!(!x.is_empty());
        assert_eq!(x, y, "{cmd}");
        assert!(!x.contains(&b'\r'));
    }
}

#[test]
fn config_output_field_is_honoured() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("from_config.csv");
    let mut json = walk("rho", 0.5, [1.0, 0.0, 0.0], 2);
    json["output"] = target.to_str().unwrap().into();
    let cfg = config(&dir, "c.json", json);
    assert!(run_ok("simulate", &cfg, &[]).is_empty());
    assert!(std::fs::read_to_string(&target).unwrap().starts_with("m,probability\n"));
}

#[test]
fn failures_leave_no_partial_output() {
    let dir = TempDir::new().unwrap();
    let existing = dir.path().join("keep.csv");
    std::fs::write(&existing, "old contents\n").unwrap();
    let bad = config(&dir, "bad.json", walk("rho", 1.5, [1.0, 0.0, 0.0], 10));
    let r = triwalk(&["simulate", "--config", bad.to_str().unwrap(), "--out", existing.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert_eq!(std::fs::read_to_string(&existing).unwrap(), "old contents\n");

    let fresh = dir.path().join("fresh.csv");
    let r = triwalk(&["density", "--config", bad.to_str().unwrap(), "--out", fresh.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(!fresh.exists());

    let good = config(&dir, "good.json", walk("rho", 0.5, [1.0, 0.0, 0.0], 10));
    let missing = dir.path().join("no_such_dir").join("out.csv");
    let r = triwalk(&["simulate", "--config", good.to_str().unwrap(), "--out", missing.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 3, "{leftovers:?}");
}
