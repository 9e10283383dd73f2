use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn desitter(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_desitter"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn report(dir: &Path, out: &str, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(out).join(name)).unwrap()).unwrap()
}

const SHORT_RUN: &str = "[grid]\ndim = 1\npoints = 64\nhalf_length = 8.0\n[solver]\ndt = 0.0625\nt_end = 1.0\n";

#[test]
fn landscape_tables() {
    let dir = TempDir::new().unwrap();
    let five = stdout(&desitter(dir.path(), &["landscape", "--n", "5"]));
    assert!(five.contains("gaps: (5/3, 2]"), "{five}");
    let three = stdout(&desitter(dir.path(), &["landscape", "--n", "3"]));
    assert!(three.contains("coverage: (3/2, ∞)") && three.contains("gaps: none"), "{three}");
    let seven = stdout(&desitter(dir.path(), &["landscape", "--n", "7"]));
    assert!(seven.contains("coverage: (7/6, 7/5] ∪ (7/2, ∞)"), "{seven}");
    let json: Value = serde_json::from_str(&stdout(&desitter(dir.path(), &["landscape", "--n", "5", "--json"]))).unwrap();
    assert_eq!(json["gaps"][0]["text"], "(5/3, 2]");
    assert_eq!(code(&desitter(dir.path(), &["landscape", "--n", "1"])), 2);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let neg = write(dir.path(), "neg.toml", "[model]\nn = 3\nm = -1.0\np = 3.0\n");
    let out = desitter(dir.path(), &["--config", neg.to_str().unwrap(), "verify-kernels"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("model.m"));
    let unknown = write(dir.path(), "unknown.toml", "[model]\nn = 3\nm = 1.0\np = 3.0\n[solver]\nstep = 0.1\n");
    let out = desitter(dir.path(), &["--config", unknown.to_str().unwrap(), "simulate"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("step") && err.contains("line 6"), "{err}");
}

#[test]
fn simulate_echoes_the_verdict() {
    let dir = TempDir::new().unwrap();
    for (m, n, p, verdict) in [
        ("0.8660254037844386", 2, 4.0, "supercritical (p > p_{2,1}=3)"),
        ("2.0", 3, 2.5, "supercritical (p > 2)"),
    ] {
        let cfg = write(dir.path(), "v.toml", &format!("[model]\nn = {n}\nm = {m}\np = {p}\n{SHORT_RUN}"));
        let out = desitter(dir.path(), &["--config", cfg.to_str().unwrap(), "--out", "v", "simulate"]);
        assert_eq!(code(&out), 0);
        assert_eq!(report(dir.path(), "v", "simulate.json")["verdict"], verdict);
    }
}

#[test]
fn zero_data_gives_zero_norms() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "z.toml",
        &format!("snapshot_every = 8\n[model]\nn = 3\nm = 1.0\np = 3.0\n{SHORT_RUN}epsilon = 0.0\n"),
    );
    let out = desitter(dir.path(), &["--config", cfg.to_str().unwrap(), "--out", "z", "simulate"]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("z/trajectory.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 18);
    for row in &rows[1..] {
        assert!(row.split(',').skip(1).all(|v| v.parse::<f64>().unwrap() == 0.0), "{row}");
    }
    let rep = report(dir.path(), "z", "simulate.json");
    assert_eq!(rep["snapshots"].as_array().unwrap().len(), 3);
    assert_eq!(rep["model"]["regime"], "dissipation");
}

#[test]
fn blow_up_exits_with_four() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "b.toml",
        &format!("[model]\nn = 3\nm = 1.0\np = 3.0\n{SHORT_RUN}epsilon = 1.0\nblowup_threshold = 1e-6\n"),
    );
    let out = desitter(dir.path(), &["--config", cfg.to_str().unwrap(), "--out", "b", "simulate"]);
    assert_eq!(code(&out), 4);
    assert!(report(dir.path(), "b", "simulate.json")["blow_up"].is_string());
}

#[test]
fn decay_fit_of_synthetic_histories() {
    let dir = TempDir::new().unwrap();
    let table = |f: &dyn Fn(f64) -> f64| {
        let mut s = String::from("t,phi_H1\n");
        for i in 0..=200 {
            let t = i as f64 * 0.05;
            s.push_str(&format!("{t},{:e}\n", f(t)));
        }
        s
    };
    let eff = write(dir.path(), "eff.toml", "[model]\nn = 3\nm = 1.299038105676658\np = 3.0\n");
    let exact = write(dir.path(), "exact.csv", &table(&|t| 2.0 * (-0.75 * t).exp()));
    let out = desitter(dir.path(), &["--config", eff.to_str().unwrap(), "decay-fit", "--trajectory", exact.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep = report(dir.path(), "out", "decay-fit.json");
    assert!((rep["fit"]["fitted_rate"].as_f64().unwrap() + 0.75).abs() < 1e-9);

    let bal = write(dir.path(), "bal.toml", "[model]\nn = 2\nm = 1.0\np = 3.0\n");
    let log = write(dir.path(), "log.csv", &table(&|t| (1.0 + t) * (-0.5 * t).exp()));
    let args = ["--config", bal.to_str().unwrap(), "decay-fit", "--trajectory", log.to_str().unwrap()];
    assert_eq!(code(&desitter(dir.path(), &args)), 3);
    let mut with_flag = args.to_vec();
    with_flag.push("--log-correction");
    assert_eq!(code(&desitter(dir.path(), &with_flag)), 0);

    let missing = write(dir.path(), "missing.csv", "t,phi_L2\n0,1\n");
    let out = desitter(dir.path(), &["decay-fit", "--trajectory", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing column `phi_H1`"));
}

#[test]
fn linear_run_decays_at_the_theoretical_rate() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "lin.toml", "[model]\nn = 3\nm = 1.299038105676658\np = 3.0\nlinear = true\n");
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&desitter(dir.path(), &["--config", c, "--out", "lin", "simulate"])), 0);
    let out = desitter(dir.path(), &["--config", c, "--out", "lin", "decay-fit", "--trajectory", "lin/trajectory.csv"]);
    assert_eq!(code(&out), 0);
    let rate = report(dir.path(), "lin", "decay-fit.json")["fit"]["fitted_rate"].as_f64().unwrap();
    assert!((rate + 0.75).abs() < 0.05, "{rate}");
}

#[test]
fn integer_damping_uses_the_psi_pair() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "mu2.toml", "[model]\nn = 3\nm = 1.118033988749895\np = 3.0\n");
    let out = desitter(dir.path(), &["--config", cfg.to_str().unwrap(), "verify-kernels", "--samples", "200"]);
    assert_eq!(code(&out), 0);
    let rep = report(dir.path(), "out", "verify-kernels.json");
    assert_eq!(rep["configured"]["path"], "kummer_psi_pair");
    assert!(rep["configured"]["wronskian"]["max_residual"].as_f64().unwrap() < 1e-8);
    assert!(rep["worst_oracle_error"].as_f64().unwrap() < 1e-6);
    assert_eq!(rep["pass"], true);
}

#[test]
fn inequality_reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "q.toml",
        "[model]\nn = 2\nm = 1.0\np = 3.0\n[inequalities]\ngrid = { dim = 2, points = 32, half_length = 8.0 }\nsamples = 8\n",
    );
    let c = cfg.to_str().unwrap();
    let a = desitter(dir.path(), &["--config", c, "--seed", "3", "--out", "a", "check-inequalities"]);
    let b = desitter(dir.path(), &["--config", c, "--seed", "3", "--out", "b", "check-inequalities"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let rep = report(dir.path(), "a", "check-inequalities.json");
    let checks = rep["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 7);
    let single = checks.iter().find(|c| c["case"] == "gagliardo-nirenberg single modes").unwrap();
    assert!((single["report"]["max_ratio"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    // Floats carry 17 significant digits.
    let text = stdout(&a);
    let ratio = text.lines().find(|l| l.contains("\"max_ratio\"")).unwrap();
    let digits = ratio.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = digits.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{digits}");
}
