//! Scenario configuration files.
//!
//! The format is one `key = value` pair per line with dotted section keys and
//! `#` comments. Every key has a default, so an empty file describes the base
//! scenario. Powers may be given in watts (`*_w`) or dBm (`*_dbm`), gains in
//! linear units or dB. Lists are comma separated.
//!
//! ```text
//! # base scenario at a higher density
//! scenario.lambda_m = 0.18
//! radio.q_max_m2m_dbm = 20
//! sweep.corr_constant_c = 0.5, 6, 30
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{PopulationState, ReplicatorConfig, StepRule};
use crate::geometry::RadiusMode;
use crate::radio::{db_to_linear, dbm_to_watts, Fading, RadioParams, SourceModel};

/// Axes of a parameter sweep; the grid is their Cartesian product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxes {
    pub lambda_m: Vec<f64>,
    pub corr_constant_c: Vec<f64>,
    pub pathloss_nu: Vec<f64>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        Self {
            lambda_m: vec![0.045, 0.09, 0.18, 0.36],
            corr_constant_c: vec![0.5, 6.0, 30.0],
            pathloss_nu: vec![2.5],
        }
    }
}

impl SweepAxes {
    /// Grid points ordered by `(lambda, c, nu)`.
    pub fn grid(&self) -> Vec<(f64, f64, f64)> {
        let mut points = Vec::new();
        for &l in &self.lambda_m {
            for &c in &self.corr_constant_c {
                for &nu in &self.pathloss_nu {
                    points.push((l, c, nu));
                }
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
        points.dedup();
        points
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub radio: RadioParams,
    pub source: SourceModel,
    pub lambda_m: f64,
    /// Maximum cluster radius; the fixed-point bound is used when absent.
    pub r_max_override_m: Option<f64>,
    pub game: ReplicatorConfig,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    /// Monte Carlo trials per validation point.
    pub trials: u64,
    /// Distance draws for the Monte Carlo utility oracle.
    pub utility_draws: u64,
    pub sweep: SweepAxes,
    /// Path-loss exponents covered by `validate`.
    pub validate_nu: Vec<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            radio: RadioParams::default(),
            source: SourceModel::default(),
            lambda_m: 0.09,
            r_max_override_m: None,
            game: ReplicatorConfig::default(),
            seed: 42,
            out_dir: None,
            trials: 10_000,
            utility_draws: 100_000,
            sweep: SweepAxes::default(),
            validate_nu: vec![2.5, 3.0],
        }
    }
}

fn parse_value<T: FromStr>(raw: &str, what: &str) -> std::result::Result<T, String> {
    raw.parse()
        .map_err(|_| format!("expected {what}, got `{raw}`"))
}

fn parse_f64(raw: &str) -> std::result::Result<f64, String> {
    let v: f64 = parse_value(raw, "a number")?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got `{raw}`"))
    }
}

fn parse_list(raw: &str) -> std::result::Result<Vec<f64>, String> {
    let items = raw
        .split(',')
        .map(|s| parse_f64(s.trim()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err("list is empty".into());
    }
    Ok(items)
}

fn render_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")
}

impl ScenarioConfig {
    pub fn radius_mode(&self) -> RadiusMode {
        self.r_max_override_m.map_or(RadiusMode::FixedPoint, RadiusMode::Override)
    }

    /// Read and validate a configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse configuration text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let fail = |line: usize, msg: String| Error::Config {
            path: origin.to_string(),
            line,
            msg,
        };
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| fail(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(first) = seen.insert(key.to_string(), line_no) {
                return Err(fail(line_no, format!("`{key}` already set on line {first}")));
            }
            cfg.set(key, value).map_err(|msg| fail(line_no, format!("{key}: {msg}")))?;
        }
        cfg.validate().map_err(|(section, msg)| {
            let line = seen
                .iter()
                .filter(|(k, _)| k.starts_with(section))
                .map(|(_, l)| *l)
                .max()
                .unwrap_or(0);
            fail(line, msg)
        })?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        let r = &mut self.radio;
        let s = &mut self.source;
        let g = &mut self.game;
        match key {
            "radio.bandwidth_hz" => r.bandwidth_hz = parse_f64(v)?,
            "radio.slot_s" => r.slot_s = parse_f64(v)?,
            "radio.noise_density_w_per_hz" => r.noise_density_w_per_hz = parse_f64(v)?,
            "radio.noise_density_dbm_per_hz" => r.noise_density_w_per_hz = dbm_to_watts(parse_f64(v)?),
            "radio.p_max_cell_w" => r.p_max_cell_w = parse_f64(v)?,
            "radio.p_max_cell_dbm" => r.p_max_cell_w = dbm_to_watts(parse_f64(v)?),
            "radio.q_max_m2m_w" => r.q_max_m2m_w = parse_f64(v)?,
            "radio.q_max_m2m_dbm" => r.q_max_m2m_w = dbm_to_watts(parse_f64(v)?),
            "radio.antenna_gain" => r.antenna_gain = parse_f64(v)?,
            "radio.antenna_gain_db" => r.antenna_gain = db_to_linear(parse_f64(v)?),
            "radio.wavelength_m" => r.wavelength_m = parse_f64(v)?,
            "radio.carrier_hz" => r.wavelength_m = 299_792_458.0 / parse_f64(v)?,
            "radio.pathloss_nu" => r.pathloss_exponent = parse_f64(v)?,
            "radio.fading_gain" => r.fading_gain = parse_f64(v)?,
            "radio.fading" => {
                r.fading = match v {
                    "deterministic" => Fading::Deterministic,
                    "rayleigh" => Fading::Rayleigh,
                    _ => return Err(format!("expected deterministic | rayleigh, got `{v}`")),
                }
            }
            "radio.bs_distance_m" => r.bs_distance_m = parse_f64(v)?,
            "source.sigma" => s.sigma = parse_f64(v)?,
            "source.mean" => s.mean = parse_f64(v)?,
            "source.delta" => s.delta = parse_f64(v)?,
            "source.corr_constant_c" => s.corr_constant_c = parse_f64(v)?,
            "source.corr_factor_kappa" => s.corr_factor_kappa = parse_f64(v)?,
            "scenario.lambda_m" => self.lambda_m = parse_f64(v)?,
            "scenario.r_max_m" => self.r_max_override_m = Some(parse_f64(v)?),
            "game.step_eta" => g.step_eta = parse_f64(v)?,
            "game.step_rule" => g.step_rule = v.parse::<StepRule>()?,
            "game.max_iters" => g.max_iters = parse_value(v, "a non-negative integer")?,
            "game.tol" => g.tol = parse_f64(v)?,
            "game.log_every" => g.log_every = parse_value(v, "a positive integer")?,
            "game.init" => {
                g.init = Some(PopulationState::new(parse_list(v)?).map_err(|e| e.to_string())?);
            }
            "run.seed" => self.seed = parse_value(v, "an unsigned 64-bit integer")?,
            "run.out_dir" => self.out_dir = Some(PathBuf::from(v)),
            "run.trials" => self.trials = parse_value(v, "a positive integer")?,
            "run.utility_draws" => self.utility_draws = parse_value(v, "a positive integer")?,
            "sweep.lambda_m" => self.sweep.lambda_m = parse_list(v)?,
            "sweep.corr_constant_c" => self.sweep.corr_constant_c = parse_list(v)?,
            "sweep.pathloss_nu" => self.sweep.pathloss_nu = parse_list(v)?,
            "validate.pathloss_nu" => self.validate_nu = parse_list(v)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Check every field; errors name the key prefix they belong to.
    fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        self.radio.validate().map_err(|e| ("radio.", e.to_string()))?;
        self.source.validate().map_err(|e| ("source.", e.to_string()))?;
        if !(self.lambda_m > 0.0) {
            return Err(("scenario.", format!("device density must be positive, got {}", self.lambda_m)));
        }
        if let Some(r) = self.r_max_override_m {
            if !(r > 0.0) {
                return Err(("scenario.", format!("radius override must be positive, got {r}")));
            }
        }
        self.game.validate().map_err(|e| ("game.", e.to_string()))?;
        if self.trials < 100 {
            return Err(("run.", format!("need at least 100 Monte Carlo trials, got {}", self.trials)));
        }
        if self.utility_draws == 0 {
            return Err(("run.", "utility draws must be positive".to_string()));
        }
        let axes = [
            ("sweep.lambda_m", &self.sweep.lambda_m, 0.0),
            ("sweep.corr_constant_c", &self.sweep.corr_constant_c, 0.0),
            ("sweep.pathloss_nu", &self.sweep.pathloss_nu, 2.0),
            ("validate.pathloss_nu", &self.validate_nu, 2.0),
        ];
        for (name, values, floor) in axes {
            if let Some(bad) = values.iter().find(|v| **v <= floor) {
                let section = if name.starts_with("sweep") { "sweep." } else { "validate." };
                return Err((section, format!("{name} entries must exceed {floor}, got {bad}")));
            }
        }
        Ok(())
    }

    /// Canonical text form; [`ScenarioConfig::parse`] reads it back to an
    /// equal value.
    pub fn to_config_string(&self) -> String {
        let r = &self.radio;
        let s = &self.source;
        let g = &self.game;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("radio.bandwidth_hz", format!("{:?}", r.bandwidth_hz));
        kv("radio.slot_s", format!("{:?}", r.slot_s));
        kv("radio.noise_density_w_per_hz", format!("{:?}", r.noise_density_w_per_hz));
        kv("radio.p_max_cell_w", format!("{:?}", r.p_max_cell_w));
        kv("radio.q_max_m2m_w", format!("{:?}", r.q_max_m2m_w));
        kv("radio.antenna_gain", format!("{:?}", r.antenna_gain));
        kv("radio.wavelength_m", format!("{:?}", r.wavelength_m));
        kv("radio.pathloss_nu", format!("{:?}", r.pathloss_exponent));
        kv("radio.fading_gain", format!("{:?}", r.fading_gain));
        kv(
            "radio.fading",
            match r.fading {
                Fading::Deterministic => "deterministic",
                Fading::Rayleigh => "rayleigh",
            }
            .to_string(),
        );
        kv("radio.bs_distance_m", format!("{:?}", r.bs_distance_m));
        kv("source.sigma", format!("{:?}", s.sigma));
        kv("source.mean", format!("{:?}", s.mean));
        kv("source.delta", format!("{:?}", s.delta));
        kv("source.corr_constant_c", format!("{:?}", s.corr_constant_c));
        kv("source.corr_factor_kappa", format!("{:?}", s.corr_factor_kappa));
        kv("scenario.lambda_m", format!("{:?}", self.lambda_m));
        if let Some(radius) = self.r_max_override_m {
            kv("scenario.r_max_m", format!("{radius:?}"));
        }
        kv("game.step_eta", format!("{:?}", g.step_eta));
        kv("game.step_rule", g.step_rule.to_string());
        kv("game.max_iters", g.max_iters.to_string());
        kv("game.tol", format!("{:?}", g.tol));
        kv("game.log_every", g.log_every.to_string());
        if let Some(init) = &g.init {
            kv("game.init", render_list(init));
        }
        kv("run.seed", self.seed.to_string());
        if let Some(dir) = &self.out_dir {
            kv("run.out_dir", dir.display().to_string());
        }
        kv("run.trials", self.trials.to_string());
        kv("run.utility_draws", self.utility_draws.to_string());
        kv("sweep.lambda_m", render_list(&self.sweep.lambda_m));
        kv("sweep.corr_constant_c", render_list(&self.sweep.corr_constant_c));
        kv("sweep.pathloss_nu", render_list(&self.sweep.pathloss_nu));
        kv("validate.pathloss_nu", render_list(&self.validate_nu));
        out
    }
}
