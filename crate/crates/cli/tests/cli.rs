use std::path::Path;
use std::process::{Command, Output};

fn complab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_complab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn orlicz_check_prints_verdict() {
    let o = complab(&["orlicz", "check", "--psi", "power:2", "--cond", "delta2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], "holds");
    let o = complab(&["orlicz", "check", "--psi", "exp_log_power:2", "--cond", "delta2", "--grid", "1e2,1e40,64"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], "fails");
    assert!(!v["fitted"].as_array().unwrap().is_empty());
}

#[test]
fn rho_csv_for_identity() {
    let o = complab(&["rho", "--symbol", "identity", "--n", "100000", "--hmin", "1e-3", "--hmax", "0.3", "--points", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,rho,stderr,n_points"));
    for l in lines {
        let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[1] * std::f64::consts::PI / f[0] - 1.0).abs() < 0.05, "{l}");
        assert_eq!(f[3], 100000.0);
    }
}

#[test]
fn rho_below_resolution_is_an_error() {
    let o = complab(&["rho", "--symbol", "identity", "--n", "10000", "--hmin", "1e-5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resolution"));
}

#[test]
fn dyadic_and_luecking() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let o = complab(&["dyadic", "--symbol", "lens", "--n", "200000", "--depth", "6", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,j,mass\n"));
    assert_eq!(text.lines().count(), 1 + (2..=64).step_by(1).filter(|k: &usize| k.is_power_of_two()).sum::<usize>());
    let o = complab(&["luecking", "--symbol", "lens", "--n", "200000", "--depth", "6", "--p", "1,2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["p"], 2.0);
}

#[test]
fn symbol_build_general_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let mut body = String::from("h,c\n");
    for k in 1..=12 {
        let x = k as f64;
        body += &format!("{},{}\n", 1.0 / x.exp_m1(), x.exp_m1() / (2.0 * x).exp_m1());
    }
    std::fs::write(&csv, body).unwrap();
    let out = dir.path().join("sym.json");
    let spec = format!("general:@{}", csv.display());
    let o = complab(&["symbol", "build", &spec, "--samples", "64", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["diagnostics"]["tail_bound"].as_f64().unwrap() < 1e-6);
    for p in v["boundary"].as_array().unwrap() {
        let (re, im) = (p[1].as_f64().unwrap(), p[2].as_f64().unwrap());
        assert!(re.hypot(im) <= 1.0 + 1e-12);
    }
}

fn write_config(dir: &Path, n: &str) -> std::path::PathBuf {
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "# small custom run\nexperiment = custom\nsymbol = const:0.3+0.2i\nn = {n}\nseed = 3\nhmin = 0.001\nhmax = 0.5\npoints = 12\ndepth = 6\np = 1,2\nbootstrap = 4\n"
        ),
    )
    .unwrap();
    cfg
}

#[test]
fn experiment_bundles_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "60000");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = complab(&["experiment", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["profile.csv", "dyadic.csv", "verdicts.json", "summary.txt"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let summary = std::fs::read_to_string(a.join("summary.txt")).unwrap();
    assert!(summary.contains("symbol = const:0.3+0.2i"));
    assert!(summary.contains(complab::VERSION));
}

#[test]
fn infeasible_experiment_fails_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "5000");
    let out = dir.path().join("x");
    let o = complab(&["experiment", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = complab(&["experiment", "lens", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = complab(&["experiment", "nope", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
