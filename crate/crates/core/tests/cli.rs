use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use evoclust::config::ScenarioConfig;
use evoclust::experiment::{read_metrics_csv, RunManifest, METRIC_COLUMNS, VALIDATE_COLUMNS};
use tempfile::TempDir;

fn evoclust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evoclust"))
        .args(args)
        .env_remove("EVOCLUST_OUT")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run_into(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"];
    args.extend_from_slice(extra);
    evoclust(&args)
}

fn read(path: impl AsRef<Path>) -> Vec<u8> {
    std::fs::read(path.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

fn header(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).lines().next().unwrap_or_default().to_string()
}

#[test]
fn run_writes_artifacts_and_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "base.cfg", "# base scenario\n");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let res = run_into("run", &cfg, out, &["--plots"]);
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    }
    for f in ["trace.csv", "metrics.csv", "ess.json", "manifest.json", "trace.svg", "preferences.svg"] {
        assert!(a.join(f).is_file(), "{f} missing");
    }
    for f in ["trace.csv", "metrics.csv", "ess.json", "trace.svg", "preferences.svg"] {
        assert_eq!(read(a.join(f)), read(b.join(f)), "{f} differs between runs");
    }
    let metrics = read(a.join("metrics.csv"));
    assert!(!metrics.contains(&b'\r'));
    assert_eq!(metrics, read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/metrics_base.csv")));
    assert_eq!(header(&metrics), METRIC_COLUMNS.join(","));

    let ess: serde_json::Value = serde_json::from_slice(&read(a.join("ess.json"))).unwrap();
    assert_eq!(ess["converged"], serde_json::Value::Bool(true));
    assert_eq!(ess["x_star"], serde_json::json!([1.0, 0.0, 0.0, 0.0]));
}

#[test]
fn manifest_embeds_the_effective_config() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.cfg", "scenario.lambda_m = 0.18\nsource.corr_constant_c = 30\n");
    let out = tmp.path().join("o");
    assert_eq!(run_into("run", &cfg, &out, &["--seed", "7"]).status.code(), Some(0));
    let manifest: RunManifest = serde_json::from_slice(&read(out.join("manifest.json"))).unwrap();
    let parsed = ScenarioConfig::parse(&manifest.config, "manifest").unwrap();
    let mut expected = ScenarioConfig::load(&cfg).unwrap();
    expected.seed = 7;
    assert_eq!(parsed, expected);
    assert_eq!(manifest.seed, 7);
    assert_eq!(manifest.command, "run");
    for digest in &manifest.artifacts {
        assert_eq!(read(out.join(&digest.file)).len() as u64, digest.bytes);
        assert_eq!(digest.sha256.len(), 64);
    }
}

#[test]
fn single_type_scenario_is_trivially_stable() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "n1.cfg", "scenario.r_max_m = 2.0\n");
    let out = tmp.path().join("o");
    let res = run_into("run", &cfg, &out, &[]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let ess: serde_json::Value = serde_json::from_slice(&read(out.join("ess.json"))).unwrap();
    assert_eq!(ess["n_max"], serde_json::json!(1));
    assert_eq!(ess["x_star"], serde_json::json!([1.0]));
    let rows = read_metrics_csv(&read(out.join("metrics.csv"))).unwrap();
    assert_eq!(rows.len(), 4);
}

#[test]
fn bad_inputs_exit_with_one() {
    let tmp = TempDir::new().unwrap();
    let bad = write_config(tmp.path(), "bad.cfg", "# fine\nscenario.lambda_m = -1\n");
    let res = run_into("run", &bad, &tmp.path().join("o"), &[]);
    assert_eq!(res.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&res.stderr);
    assert!(msg.contains("bad.cfg:2:"), "{msg}");

    let unknown = write_config(tmp.path(), "unknown.cfg", "radio.colour = 3\n");
    assert_eq!(run_into("run", &unknown, &tmp.path().join("o"), &[]).status.code(), Some(1));

    let good = write_config(tmp.path(), "good.cfg", "");
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    assert_eq!(run_into("run", &good, &blocker.join("sub"), &[]).status.code(), Some(1));
    assert_eq!(run_into("validate", &good, &tmp.path().join("v"), &["--trials", "50"]).status.code(), Some(1));
}

#[test]
fn out_dir_falls_back_to_the_environment() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "e.cfg", "");
    let env_out = tmp.path().join("from_env");
    let res = Command::new(env!("CARGO_BIN_EXE_evoclust"))
        .args(["run", cfg.to_str().unwrap(), "--quiet"])
        .env("EVOCLUST_OUT", &env_out)
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(0));
    assert!(env_out.join("metrics.csv").is_file());
}

#[test]
fn single_point_sweep_matches_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "s.cfg",
        "sweep.lambda_m = 0.09\nsweep.corr_constant_c = 6\nsweep.pathloss_nu = 2.5\n",
    );
    let (run_out, sweep_out) = (tmp.path().join("r"), tmp.path().join("s"));
    assert_eq!(run_into("run", &cfg, &run_out, &[]).status.code(), Some(0));
    assert_eq!(run_into("sweep", &cfg, &sweep_out, &[]).status.code(), Some(0));
    assert_eq!(read(run_out.join("metrics.csv")), read(sweep_out.join("sweep.csv")));
    let prefs = String::from_utf8(read(sweep_out.join("preferences.csv"))).unwrap();
    assert_eq!(prefs.lines().count(), 5);
}

#[test]
fn sweep_rows_are_sorted() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "s.cfg", "sweep.lambda_m = 0.36, 0.045\nsweep.corr_constant_c = 30, 0.5\n");
    let out = tmp.path().join("o");
    assert_eq!(run_into("sweep", &cfg, &out, &[]).status.code(), Some(0));
    let rows = read_metrics_csv(&read(out.join("sweep.csv"))).unwrap();
    assert_eq!(rows.len(), 16);
    let keys: Vec<_> = rows
        .iter()
        .map(|r| (r.lambda_m, r.corr_constant_c, r.pathloss_nu, r.strategy.as_str()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
}

#[test]
fn validate_reports_every_check() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "v.cfg",
        "sweep.lambda_m = 0.09\nsweep.corr_constant_c = 6\nvalidate.pathloss_nu = 2.5\nrun.utility_draws = 2000\n",
    );
    let out = tmp.path().join("o");
    let res = run_into("validate", &cfg, &out, &["--trials", "100"]);
    assert!(matches!(res.status.code(), Some(0) | Some(2)));
    let text = String::from_utf8(read(out.join("validate.csv"))).unwrap();
    assert_eq!(text.lines().next().unwrap(), VALIDATE_COLUMNS.join(","));
    let checks: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(checks.iter().filter(|c| **c == "interference").count(), 1);
    assert_eq!(checks.iter().filter(|c| **c == "utility_quadrature").count(), 4);
    assert_eq!(checks.iter().filter(|c| **c == "utility_monte_carlo").count(), 4);
    assert_eq!(checks.last(), Some(&"gamma_sum"));
    let all_pass = text.lines().skip(1).all(|l| l.ends_with(",true"));
    assert_eq!(res.status.code(), Some(if all_pass { 0 } else { 2 }));
}
