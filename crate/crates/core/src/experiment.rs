//! Scenario runs, parameter sweeps and validation reports, with their
//! on-disk artifacts.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::game::{solve_ess, utility_closed_form, utility_vector, EssReport, RunTrace, StrategySet};
use crate::geometry::max_cluster_radius;
use crate::metrics::{scenario_rows, MetricRow, ScenarioRef, StrategyLabel};
use crate::plot::{bar_chart, line_chart, Series};
use crate::radio::watts_to_dbm;
use crate::rng::{tags, StreamSeed};
use crate::validation::{gamma_sum_max_error, interference_check, utility_monte_carlo, utility_quadrature};

pub const METRIC_COLUMNS: [&str; 12] = [
    "scenario_id",
    "lambda_m",
    "corr_constant_c",
    "pathloss_nu",
    "strategy",
    "n_max",
    "avg_power_per_mtd_w",
    "avg_power_per_mtd_dbm",
    "total_power_per_cluster_w",
    "total_power_per_cluster_dbm",
    "redundant_bits",
    "epsilon_star",
];

pub const VALIDATE_COLUMNS: [&str; 12] = [
    "check",
    "lambda_m",
    "corr_constant_c",
    "pathloss_nu",
    "cluster_type",
    "reference",
    "estimate",
    "std_error",
    "rel_error",
    "z_score",
    "tolerance",
    "pass",
];

/// Relative tolerance of the interference check.
pub const INTERFERENCE_REL_TOL: f64 = 0.03;
/// Allowed distance of a Monte Carlo mean from its reference, in standard errors.
pub const Z_TOL: f64 = 3.0;
pub const QUADRATURE_REL_TOL: f64 = 1e-6;
pub const GAMMA_SUM_ABS_TOL: f64 = 1e-9;
pub const GAMMA_SUM_NUS: [f64; 4] = [2.1, 2.5, 3.0, 3.5];
pub const GAMMA_SUM_J_MAX: u64 = 64;

/// Identifier of a grid point, e.g. `l0.09_c6_nu2.5`.
pub fn scenario_id(lambda_m: f64, c: f64, nu: f64) -> String {
    format!("l{lambda_m}_c{c}_nu{nu}")
}

/// Everything computed for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub id: String,
    pub strategy: StrategySet,
    pub report: EssReport,
    pub trace: RunTrace,
    pub rows: Vec<MetricRow>,
}

impl ScenarioOutcome {
    pub fn row(&self, label: StrategyLabel) -> &MetricRow {
        self.rows
            .iter()
            .find(|r| r.strategy == label)
            .expect("every scenario carries all four strategy rows")
    }
}

/// Solve the game at the configured scenario point and evaluate all baselines.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let id = scenario_id(cfg.lambda_m, cfg.source.corr_constant_c, cfg.radio.pathloss_exponent);
    let strategy = StrategySet::for_scenario(cfg.lambda_m, &cfg.radio, &cfg.source, cfg.radius_mode())?;
    let u = utility_vector(&strategy, &cfg.radio, &cfg.source)?;
    let (report, trace) = solve_ess(&u, &cfg.game)?;
    let scenario = ScenarioRef {
        id: &id,
        strategy: &strategy,
        radio: &cfg.radio,
        source: &cfg.source,
    };
    let rows = scenario_rows(&scenario, &report.x_star, report.epsilon_star)?;
    Ok(ScenarioOutcome {
        id,
        strategy,
        report,
        trace,
        rows,
    })
}

/// The configuration at one sweep grid point.
pub fn grid_config(base: &ScenarioConfig, lambda_m: f64, c: f64, nu: f64) -> ScenarioConfig {
    let mut cfg = base.clone();
    cfg.lambda_m = lambda_m;
    cfg.source.corr_constant_c = c;
    cfg.radio.pathloss_exponent = nu;
    cfg
}

/// Run every point of the sweep grid. Failures are kept per point.
pub fn run_sweep(cfg: &ScenarioConfig) -> Vec<(String, Result<ScenarioOutcome>)> {
    cfg.sweep
        .grid()
        .par_iter()
        .map(|&(l, c, nu)| (scenario_id(l, c, nu), run_scenario(&grid_config(cfg, l, c, nu))))
        .collect()
}

/// Sort rows by `(lambda, c, nu, strategy)`.
pub fn sort_rows(rows: &mut [MetricRow]) {
    rows.sort_by(|a, b| {
        a.lambda_m
            .total_cmp(&b.lambda_m)
            .then(a.corr_constant_c.total_cmp(&b.corr_constant_c))
            .then(a.pathloss_nu.total_cmp(&b.pathloss_nu))
            .then(a.strategy.as_str().cmp(b.strategy.as_str()))
    });
}

/// Mean percentage by which ESS total power undercuts `baseline`.
pub fn mean_reduction_pct(rows: &[MetricRow], baseline: StrategyLabel) -> Option<f64> {
    let mut gains = Vec::new();
    for ess in rows.iter().filter(|r| r.strategy == StrategyLabel::Ess) {
        let base = rows.iter().find(|r| {
            r.strategy == baseline && r.scenario_id == ess.scenario_id
        })?;
        gains.push(100.0 * (1.0 - ess.total_power_per_cluster_w / base.total_power_per_cluster_w));
    }
    (!gains.is_empty()).then(|| gains.iter().sum::<f64>() / gains.len() as f64)
}

/// One line of `validate.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub check: String,
    pub lambda_m: Option<f64>,
    pub corr_constant_c: Option<f64>,
    pub pathloss_nu: Option<f64>,
    pub cluster_type: Option<u64>,
    pub reference: f64,
    pub estimate: f64,
    pub std_error: Option<f64>,
    pub rel_error: Option<f64>,
    pub z_score: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Every oracle comparison of the `validate` command.
pub fn run_validation(cfg: &ScenarioConfig) -> Result<Vec<ValidationRow>> {
    let mut rows = Vec::new();

    let mut points = Vec::new();
    for &l in &cfg.sweep.lambda_m {
        for &nu in &cfg.validate_nu {
            points.push((l, nu));
        }
    }
    let root = StreamSeed::new(cfg.seed, tags::INTERFERENCE);
    let interference = points
        .par_iter()
        .enumerate()
        .map(|(i, &(l, nu))| -> Result<ValidationRow> {
            let radio = cfg.radio.with_pathloss(nu);
            let (r_n, _) = max_cluster_radius(l, cfg.source.entropy(), &radio, cfg.radius_mode())?;
            let check = interference_check(r_n, &radio, cfg.trials, &root.child(i as u64))?;
            let z = check.estimate.z_score(check.analytic_w);
            Ok(ValidationRow {
                check: "interference".into(),
                lambda_m: Some(l),
                corr_constant_c: None,
                pathloss_nu: Some(nu),
                cluster_type: None,
                reference: check.analytic_w,
                estimate: check.estimate.mean,
                std_error: Some(check.estimate.std_error),
                rel_error: Some(check.rel_error),
                z_score: Some(z),
                tolerance: INTERFERENCE_REL_TOL,
                pass: check.rel_error <= INTERFERENCE_REL_TOL && z <= Z_TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(interference);

    let root = StreamSeed::new(cfg.seed, tags::UTILITY_MC);
    let grid = cfg.sweep.grid();
    let utility = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(l, c, nu))| -> Result<Vec<ValidationRow>> {
            let point = grid_config(cfg, l, c, nu);
            let set = StrategySet::for_scenario(l, &point.radio, &point.source, point.radius_mode())?;
            let stream = root.child(i as u64);
            let mut out = Vec::new();
            for j in 1..=set.n_max() {
                let closed = utility_closed_form(j, &set, &point.radio, &point.source)?;
                let quad = utility_quadrature(j, &set, &point.radio, &point.source)?;
                let rel = (quad - closed).abs() / closed.abs();
                let base = ValidationRow {
                    check: "utility_quadrature".into(),
                    lambda_m: Some(l),
                    corr_constant_c: Some(c),
                    pathloss_nu: Some(nu),
                    cluster_type: Some(j),
                    reference: quad,
                    estimate: closed,
                    std_error: None,
                    rel_error: Some(rel),
                    z_score: None,
                    tolerance: QUADRATURE_REL_TOL,
                    pass: rel <= QUADRATURE_REL_TOL,
                };
                let mc = utility_monte_carlo(j, &set, &point.radio, &point.source, cfg.utility_draws, &stream.child(j))?;
                let z = mc.z_score(closed);
                out.push(base.clone());
                out.push(ValidationRow {
                    check: "utility_monte_carlo".into(),
                    reference: mc.mean,
                    std_error: Some(mc.std_error),
                    rel_error: Some((mc.mean - closed).abs() / closed.abs()),
                    z_score: Some(z),
                    tolerance: Z_TOL,
                    pass: z <= Z_TOL,
                    ..base
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(utility.into_iter().flatten());

    let gamma_error = gamma_sum_max_error(GAMMA_SUM_J_MAX, &GAMMA_SUM_NUS);
    rows.push(ValidationRow {
        check: "gamma_sum".into(),
        lambda_m: None,
        corr_constant_c: None,
        pathloss_nu: None,
        cluster_type: None,
        reference: 0.0,
        estimate: gamma_error,
        std_error: None,
        rel_error: None,
        z_score: None,
        tolerance: GAMMA_SUM_ABS_TOL,
        pass: gamma_error <= GAMMA_SUM_ABS_TOL,
    });
    Ok(rows)
}

fn dbm_cell(watts: f64) -> String {
    watts_to_dbm(watts).map(|d| format!("{d:.2}")).unwrap_or_default()
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf)
}

/// CSV bytes for metric rows in the order given.
pub fn metrics_csv(rows: &[MetricRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(METRIC_COLUMNS)?;
        for r in rows {
            w.write_record([
                r.scenario_id.clone(),
                r.lambda_m.to_string(),
                r.corr_constant_c.to_string(),
                r.pathloss_nu.to_string(),
                r.strategy.to_string(),
                r.n_max.to_string(),
                format!("{:e}", r.avg_power_per_mtd_w),
                dbm_cell(r.avg_power_per_mtd_w),
                format!("{:e}", r.total_power_per_cluster_w),
                dbm_cell(r.total_power_per_cluster_w),
                r.redundant_bits.to_string(),
                opt(r.epsilon_star),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv buffer>", e))?;
    }
    Ok(buf)
}

/// Parse rows written by [`metrics_csv`].
pub fn read_metrics_csv(bytes: &[u8]) -> Result<Vec<MetricRow>> {
    let mut reader = csv::Reader::from_reader(bytes);
    let bad = |what: &str, v: &str| Error::domain(format!("bad {what} `{v}` in metrics CSV"));
    let mut rows = Vec::new();
    for record in reader.records() {
        let rec = record?;
        let num = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(METRIC_COLUMNS[i], &rec[i]));
        rows.push(MetricRow {
            scenario_id: rec[0].to_string(),
            lambda_m: num(1)?,
            corr_constant_c: num(2)?,
            pathloss_nu: num(3)?,
            strategy: rec[4].parse()?,
            n_max: rec[5].parse().map_err(|_| bad("n_max", &rec[5]))?,
            avg_power_per_mtd_w: num(6)?,
            total_power_per_cluster_w: num(8)?,
            redundant_bits: num(10)?,
            epsilon_star: if rec[11].is_empty() { None } else { Some(num(11)?) },
        });
    }
    Ok(rows)
}

fn trace_csv(trace: &RunTrace, n: usize) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        let mut header = vec!["iteration".to_string()];
        header.extend((1..=n).map(|j| format!("x_{j}")));
        header.extend(["mean_fitness_w", "avg_power_w", "avg_power_dbm"].map(String::from));
        w.write_record(&header)?;
        for r in &trace.records {
            let mut rec = vec![r.iteration.to_string()];
            rec.extend(r.x.iter().map(|v| format!("{v:e}")));
            rec.push(format!("{:e}", r.mean_fitness_w));
            rec.push(format!("{:e}", r.avg_power_w));
            rec.push(dbm_cell(r.avg_power_w));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv buffer>", e))?;
    }
    Ok(buf)
}

fn preferences_csv(outcomes: &[&ScenarioOutcome]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(["scenario_id", "lambda_m", "corr_constant_c", "pathloss_nu", "n_max", "cluster_type", "share"])?;
        for o in outcomes {
            let ess = o.row(StrategyLabel::Ess);
            for (j, share) in o.report.x_star.iter().enumerate() {
                w.write_record([
                    o.id.clone(),
                    ess.lambda_m.to_string(),
                    ess.corr_constant_c.to_string(),
                    ess.pathloss_nu.to_string(),
                    ess.n_max.to_string(),
                    (j + 1).to_string(),
                    format!("{share:e}"),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv buffer>", e))?;
    }
    Ok(buf)
}

fn validate_csv(rows: &[ValidationRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(VALIDATE_COLUMNS)?;
        let e = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in rows {
            w.write_record([
                r.check.clone(),
                opt(r.lambda_m),
                opt(r.corr_constant_c),
                opt(r.pathloss_nu),
                opt(r.cluster_type),
                format!("{:e}", r.reference),
                format!("{:e}", r.estimate),
                e(r.std_error),
                e(r.rel_error),
                e(r.z_score),
                format!("{:e}", r.tolerance),
                r.pass.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv buffer>", e))?;
    }
    Ok(buf)
}

/// JSON body of `ess.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssArtifact {
    pub scenario_id: String,
    pub n_max: u64,
    pub r_max_m: f64,
    pub radii_m: Vec<f64>,
    #[serde(flatten)]
    pub report: EssReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactDigest {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioStatus {
    pub scenario_id: String,
    pub converged: bool,
    pub iterations: Option<u64>,
    pub error: Option<String>,
}

/// `manifest.json`: enough to rerun and to verify the artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// Canonical config text; parses back to the effective configuration.
    pub config: String,
    pub artifacts: Vec<ArtifactDigest>,
    pub started_unix_s: f64,
    pub elapsed_s: f64,
    pub scenarios: Vec<ScenarioStatus>,
}

/// Collects artifact files for one command invocation.
struct ArtifactSink {
    dir: PathBuf,
    digests: Vec<ArtifactDigest>,
}

impl ArtifactSink {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            digests: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.digests.push(ArtifactDigest {
            file: name.to_string(),
            bytes: bytes.len() as u64,
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    fn finish(mut self, command: &str, cfg: &ScenarioConfig, clock: (f64, Instant), scenarios: Vec<ScenarioStatus>) -> Result<Vec<ArtifactDigest>> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed: cfg.seed,
            config: cfg.to_config_string(),
            artifacts: self.digests.clone(),
            started_unix_s: clock.0,
            elapsed_s: clock.1.elapsed().as_secs_f64(),
            scenarios,
        };
        let mut json = serde_json::to_vec_pretty(&manifest)?;
        json.push(b'\n');
        self.write("manifest.json", &json)?;
        Ok(self.digests)
    }
}

fn start_clock() -> (f64, Instant) {
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    (now, Instant::now())
}

/// Outcome of a CLI command; `ok` selects the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandSummary {
    pub ok: bool,
    pub lines: Vec<String>,
    pub artifacts: Vec<ArtifactDigest>,
}

/// `run`: one scenario, its trace, metrics and stability report.
pub fn cli_run(cfg: &ScenarioConfig, out: &Path, plots: bool) -> Result<CommandSummary> {
    let clock = start_clock();
    let outcome = run_scenario(cfg)?;
    let mut sink = ArtifactSink::new(out)?;
    let n = outcome.strategy.n_max() as usize;
    sink.write("trace.csv", &trace_csv(&outcome.trace, n)?)?;
    sink.write("metrics.csv", &metrics_csv(&outcome.rows)?)?;
    let artifact = EssArtifact {
        scenario_id: outcome.id.clone(),
        n_max: outcome.strategy.n_max(),
        r_max_m: outcome.strategy.r_max_m(),
        radii_m: outcome.strategy.radii().to_vec(),
        report: outcome.report.clone(),
    };
    let mut json = serde_json::to_vec_pretty(&artifact)?;
    json.push(b'\n');
    sink.write("ess.json", &json)?;
    if plots {
        let series = Series {
            name: "ess run".into(),
            points: outcome
                .trace
                .records
                .iter()
                .map(|r| (r.iteration as f64, r.avg_power_w))
                .collect(),
        };
        let svg = line_chart("Average power per device", "iteration", "power (W)", &[series]);
        sink.write("trace.svg", svg.as_bytes())?;
        let bars: Vec<(String, f64)> = outcome
            .report
            .x_star
            .iter()
            .enumerate()
            .map(|(j, x)| ((j + 1).to_string(), *x))
            .collect();
        sink.write("preferences.svg", bar_chart("Stable preferences", "cluster type", "share", &bars).as_bytes())?;
    }
    let r = &outcome.report;
    let status = ScenarioStatus {
        scenario_id: outcome.id.clone(),
        converged: r.converged,
        iterations: Some(r.iterations),
        error: None,
    };
    let artifacts = sink.finish("run", cfg, clock, vec![status])?;
    let ess = outcome.row(StrategyLabel::Ess);
    let lines = vec![
        format!(
            "{}: N = {}, converged = {} after {} iterations, eps* = {:.6}, stable = {}",
            outcome.id, outcome.strategy.n_max(), r.converged, r.iterations, r.epsilon_star, r.jacobian.stable
        ),
        format!(
            "x* = [{}]",
            r.x_star.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", ")
        ),
        format!(
            "ESS total power per cluster {:e} W ({} dBm)",
            ess.total_power_per_cluster_w,
            dbm_cell(ess.total_power_per_cluster_w)
        ),
    ];
    Ok(CommandSummary {
        ok: r.converged,
        lines,
        artifacts,
    })
}

/// `sweep`: the Cartesian grid of scenarios.
pub fn cli_sweep(cfg: &ScenarioConfig, out: &Path, plots: bool) -> Result<CommandSummary> {
    let clock = start_clock();
    let results = run_sweep(cfg);
    let mut sink = ArtifactSink::new(out)?;
    let mut rows = Vec::new();
    let mut statuses = Vec::new();
    let mut outcomes = Vec::new();
    let mut lines = Vec::new();
    for (id, result) in &results {
        match result {
            Ok(o) => {
                rows.extend(o.rows.iter().cloned());
                statuses.push(ScenarioStatus {
                    scenario_id: id.clone(),
                    converged: o.report.converged,
                    iterations: Some(o.report.iterations),
                    error: None,
                });
                outcomes.push(o);
            }
            Err(e) => {
                lines.push(format!("{id}: failed: {e}"));
                statuses.push(ScenarioStatus {
                    scenario_id: id.clone(),
                    converged: false,
                    iterations: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    sort_rows(&mut rows);
    sink.write("sweep.csv", &metrics_csv(&rows)?)?;
    sink.write("preferences.csv", &preferences_csv(&outcomes)?)?;
    if plots && !rows.is_empty() {
        for (name, svg) in sweep_plots(&rows) {
            sink.write(&name, svg.as_bytes())?;
        }
    }
    let ok = statuses.iter().all(|s| s.converged);
    let converged = statuses.iter().filter(|s| s.converged).count();
    lines.push(format!("{} grid points, {converged} converged, {} rows", statuses.len(), rows.len()));
    for (label, target) in [(StrategyLabel::Pure, 23.4), (StrategyLabel::Uniform, 9.6)] {
        if let Some(pct) = mean_reduction_pct(&rows, label) {
            lines.push(format!("mean ESS power reduction vs {label}: {pct:.1}% (reference figure {target}%)"));
        }
    }
    let artifacts = sink.finish("sweep", cfg, clock, statuses)?;
    Ok(CommandSummary { ok, lines, artifacts })
}

fn sweep_plots(rows: &[MetricRow]) -> Vec<(String, String)> {
    let first = &rows[0];
    let by = |label: StrategyLabel, keep: &dyn Fn(&MetricRow) -> bool, x: fn(&MetricRow) -> f64, y: fn(&MetricRow) -> Option<f64>| Series {
        name: label.to_string(),
        points: rows
            .iter()
            .filter(|r| r.strategy == label && keep(r))
            .filter_map(|r| y(r).map(|v| (x(r), v)))
            .collect(),
    };
    let (c0, nu0, l0) = (first.corr_constant_c, first.pathloss_nu, first.lambda_m);
    let at_c: &dyn Fn(&MetricRow) -> bool = &|r| r.corr_constant_c == c0 && r.pathloss_nu == nu0;
    let at_l: &dyn Fn(&MetricRow) -> bool = &|r| r.lambda_m == l0 && r.pathloss_nu == nu0;
    let power: Vec<Series> = StrategyLabel::ALL
        .iter()
        .map(|&l| by(l, at_c, |r| r.lambda_m, |r| Some(r.total_power_per_cluster_w)))
        .collect();
    let bits: Vec<Series> = [StrategyLabel::Ess, StrategyLabel::Pure, StrategyLabel::Uniform]
        .iter()
        .map(|&l| by(l, at_l, |r| r.corr_constant_c, |r| Some(r.redundant_bits)))
        .collect();
    let eps = vec![by(StrategyLabel::Ess, at_c, |r| r.lambda_m, |r| r.epsilon_star)];
    vec![
        (
            "sweep_total_power.svg".into(),
            line_chart("Total power per cluster", "device density (1/m^2)", "power (W)", &power),
        ),
        (
            "sweep_redundant_bits.svg".into(),
            line_chart("Redundant bits per cluster", "correlation constant c (m)", "bits", &bits),
        ),
        (
            "sweep_epsilon.svg".into(),
            line_chart("Tolerated deviating fraction", "device density (1/m^2)", "eps*", &eps),
        ),
    ]
}

/// `validate`: closed forms against their numerical oracles.
pub fn cli_validate(cfg: &ScenarioConfig, out: &Path) -> Result<CommandSummary> {
    let clock = start_clock();
    let rows = run_validation(cfg)?;
    let mut sink = ArtifactSink::new(out)?;
    sink.write("validate.csv", &validate_csv(&rows)?)?;
    let artifacts = sink.finish("validate", cfg, clock, Vec::new())?;
    let mut lines = Vec::new();
    for check in ["interference", "utility_quadrature", "utility_monte_carlo", "gamma_sum"] {
        let group: Vec<_> = rows.iter().filter(|r| r.check == check).collect();
        let passed = group.iter().filter(|r| r.pass).count();
        lines.push(format!("{check}: {passed}/{} passed", group.len()));
    }
    Ok(CommandSummary {
        ok: rows.iter().all(|r| r.pass),
        lines,
        artifacts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_csv_round_trips() {
        let cfg = ScenarioConfig::default();
        let outcome = run_scenario(&cfg).unwrap();
        let bytes = metrics_csv(&outcome.rows).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().next().unwrap(), METRIC_COLUMNS.join(","));
        assert_eq!(read_metrics_csv(&bytes).unwrap(), outcome.rows);
    }

    #[test]
    fn rows_sort_by_grid_then_label() {
        let cfg = ScenarioConfig::default();
        let mut rows = run_scenario(&grid_config(&cfg, 0.18, 6.0, 2.5)).unwrap().rows;
        rows.extend(run_scenario(&grid_config(&cfg, 0.09, 30.0, 2.5)).unwrap().rows);
        sort_rows(&mut rows);
        assert_eq!(rows[0].lambda_m, 0.09);
        let labels: Vec<_> = rows[..4].iter().map(|r| r.strategy.as_str()).collect();
        assert_eq!(labels, ["ess", "pure", "singleton", "uniform"]);
    }

    #[test]
    fn scenario_ids() {
        assert_eq!(scenario_id(0.09, 6.0, 2.5), "l0.09_c6_nu2.5");
    }
}
