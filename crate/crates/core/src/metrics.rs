//! Baseline population states and the per-scenario comparison metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{utility_terms, PopulationState, StrategySet};
use crate::radio::{cellular_link, redundant_bits, RadioParams, SourceModel};

/// How the population state of a metric row was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyLabel {
    Ess,
    Pure,
    Singleton,
    Uniform,
}

impl StrategyLabel {
    pub const ALL: [StrategyLabel; 4] = [
        StrategyLabel::Ess,
        StrategyLabel::Pure,
        StrategyLabel::Singleton,
        StrategyLabel::Uniform,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyLabel::Ess => "ess",
            StrategyLabel::Pure => "pure",
            StrategyLabel::Singleton => "singleton",
            StrategyLabel::Uniform => "uniform",
        }
    }
}

impl std::fmt::Display for StrategyLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StrategyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown strategy label `{s}`")))
    }
}

/// One row of `metrics.csv` / `sweep.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub scenario_id: String,
    pub lambda_m: f64,
    pub corr_constant_c: f64,
    pub pathloss_nu: f64,
    pub strategy: StrategyLabel,
    /// `-sum_j x_j u_j`
    pub avg_power_per_mtd_w: f64,
    /// `-sum_j x_j j u_j`
    pub total_power_per_cluster_w: f64,
    pub redundant_bits: f64,
    pub epsilon_star: Option<f64>,
    pub n_max: u64,
}

/// The quantities one cluster type contributes to a metric row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeMetrics {
    pub cluster_type: u64,
    pub radius_m: f64,
    pub avg_power_w: f64,
    pub total_power_w: f64,
    pub redundant_bits: f64,
}

/// Scenario a metric row belongs to.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioRef<'a> {
    pub id: &'a str,
    pub strategy: &'a StrategySet,
    pub radio: &'a RadioParams,
    pub source: &'a SourceModel,
}

/// Every device in the largest cluster type.
pub fn pure_state(n_max: u64) -> Result<PopulationState> {
    PopulationState::pure(n_max as usize, n_max as usize)
}

pub fn uniform_state(n_max: u64) -> Result<PopulationState> {
    PopulationState::uniform(n_max as usize)
}

/// Power of a ball of `n_max` devices that all use their own cellular link.
pub fn singleton_power(n_max: u64, p: &RadioParams, src: &SourceModel) -> Result<f64> {
    Ok(n_max as f64 * cellular_link(src.entropy(), p)?.power_w)
}

/// Per-type power and redundancy, indexed by `j - 1`.
pub fn type_metrics(strategy: &StrategySet, p: &RadioParams, src: &SourceModel) -> Result<Vec<TypeMetrics>> {
    let h_m = src.entropy();
    (1..=strategy.n_max())
        .map(|j| {
            let terms = utility_terms(j, strategy, p, src)?;
            let radius_m = strategy.radius(j)?;
            Ok(TypeMetrics {
                cluster_type: j,
                radius_m,
                avg_power_w: terms.total_w() / j as f64,
                total_power_w: terms.total_w(),
                redundant_bits: redundant_bits(h_m, j, radius_m, src.corr_constant_c)?,
            })
        })
        .collect()
}

/// Population-weighted expectation of the per-type quantities.
pub fn expected_metrics(x: &PopulationState, label: StrategyLabel, scenario: &ScenarioRef<'_>) -> Result<MetricRow> {
    let types = type_metrics(scenario.strategy, scenario.radio, scenario.source)?;
    expected_from_types(x, label, scenario, &types)
}

fn expected_from_types(
    x: &PopulationState,
    label: StrategyLabel,
    scenario: &ScenarioRef<'_>,
    types: &[TypeMetrics],
) -> Result<MetricRow> {
    if x.len() != types.len() {
        return Err(Error::domain(format!(
            "state has {} types, scenario has {}",
            x.len(),
            types.len()
        )));
    }
    let weighted = |f: fn(&TypeMetrics) -> f64| x.iter().zip(types).map(|(xj, t)| xj * f(t)).sum::<f64>();
    Ok(MetricRow {
        scenario_id: scenario.id.to_string(),
        lambda_m: scenario.strategy.lambda_m(),
        corr_constant_c: scenario.source.corr_constant_c,
        pathloss_nu: scenario.radio.pathloss_exponent,
        strategy: label,
        avg_power_per_mtd_w: weighted(|t| t.avg_power_w),
        total_power_per_cluster_w: weighted(|t| t.total_power_w),
        redundant_bits: weighted(|t| t.redundant_bits),
        epsilon_star: None,
        n_max: scenario.strategy.n_max(),
    })
}

/// The four rows of a scenario, ordered by strategy label.
pub fn scenario_rows(
    scenario: &ScenarioRef<'_>,
    x_star: &PopulationState,
    epsilon_star: f64,
) -> Result<Vec<MetricRow>> {
    let types = type_metrics(scenario.strategy, scenario.radio, scenario.source)?;
    let n = scenario.strategy.n_max();
    let mut ess = expected_from_types(x_star, StrategyLabel::Ess, scenario, &types)?;
    ess.epsilon_star = Some(epsilon_star);
    let pure = expected_from_types(&pure_state(n)?, StrategyLabel::Pure, scenario, &types)?;
    let uniform = expected_from_types(&uniform_state(n)?, StrategyLabel::Uniform, scenario, &types)?;
    let single = cellular_link(scenario.source.entropy(), scenario.radio)?.power_w;
    let singleton = MetricRow {
        strategy: StrategyLabel::Singleton,
        avg_power_per_mtd_w: single,
        total_power_per_cluster_w: singleton_power(n, scenario.radio, scenario.source)?,
        redundant_bits: 0.0,
        epsilon_star: None,
        ..pure.clone()
    };
    Ok(vec![ess, pure, singleton, uniform])
}
