//! Solving the clustering game for its evolutionarily stable state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::dynamics::{
    advance, pairwise_utility, replicator_field, PopulationState, ReplicatorConfig, ReplicatorField, StepRule,
};
use crate::game::utility::{utility_vector, StrategySet, UtilityVector};
use crate::radio::{RadioParams, SourceModel};

/// Map raw utilities (negated watts) to `1 + u / max|u|`.
///
/// The costliest type lands on 0 and a free type on 1. Positive scaling plus
/// a common shift leaves the replicator flow on the simplex unchanged.
pub fn normalize_utilities(u: &[f64]) -> Vec<f64> {
    let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return vec![1.0; u.len()];
    }
    u.iter().map(|v| 1.0 + v / scale).collect()
}

/// Maximum deviating fraction that the state tolerates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonStar {
    pub value: f64,
    /// Some type had `2 fit_j - u_j = 0`; its bound is unlimited.
    pub zero_denominator: bool,
}

/// `min_j 1 / |2 fit_j - u_j|`, clamped to `(0, 1]`.
pub fn epsilon_star(x: &[f64], u: &[f64], fit: &[f64]) -> Result<EpsilonStar> {
    if x.len() != u.len() || fit.len() != u.len() {
        return Err(Error::domain("state, utilities and fitness differ in length"));
    }
    let mut value = 1.0f64;
    let mut zero_denominator = false;
    for (uj, fj) in u.iter().zip(fit) {
        let denom = (2.0 * fj - uj).abs();
        if denom == 0.0 {
            zero_denominator = true;
        } else {
            value = value.min(1.0 / denom);
        }
    }
    Ok(EpsilonStar {
        value: value.max(f64::MIN_POSITIVE),
        zero_denominator,
    })
}

/// Exact derivative `d xdot_j / d x_m` of the replicator field.
pub fn jacobian(x: &[f64], u: &[f64]) -> Result<Vec<Vec<f64>>> {
    let field = replicator_field(x, u)?;
    let n = u.len();
    Ok((0..n)
        .map(|j| {
            (0..n)
                .map(|m| {
                    let diag = if j == m { field.fitness[j] - field.mean_fitness } else { 0.0 };
                    diag + x[j] * (pairwise_utility(j, m, u) - 2.0 * field.fitness[m])
                })
                .collect()
        })
        .collect())
}

/// Entries `(u_jm - 2 fit_m) x_m` of the stability certificate.
pub fn certificate_entries(x: &[f64], u: &[f64]) -> Result<Vec<Vec<f64>>> {
    let field = replicator_field(x, u)?;
    let n = u.len();
    Ok((0..n)
        .map(|j| {
            (0..n)
                .map(|m| (pairwise_utility(j, m, u) - 2.0 * field.fitness[m]) * x[m])
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianCertificate {
    /// Row `j`, column `m`.
    pub entries: Vec<Vec<f64>>,
    /// Whether column `m` is negative throughout; `None` for extinct types.
    pub column_negative: Vec<Option<bool>>,
    pub stable: bool,
}

/// Sign certificate at `x`: stable when every entry of a surviving column is
/// negative. A single type is stable by default.
pub fn jacobian_diagnostic(x: &[f64], u: &[f64]) -> Result<JacobianCertificate> {
    let entries = certificate_entries(x, u)?;
    let column_negative: Vec<Option<bool>> = (0..u.len())
        .map(|m| (x[m] > 0.0).then(|| entries.iter().all(|row| row[m] < 0.0)))
        .collect();
    let stable = u.len() == 1 || column_negative.iter().all(|c| c.unwrap_or(true));
    Ok(JacobianCertificate {
        entries,
        column_negative,
        stable,
    })
}

/// One logged point of a replicator run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    pub x: Vec<f64>,
    /// Mean fitness in watts (raw scale).
    pub mean_fitness_w: f64,
    /// Expected transmit power per device, `-sum x_j u_j`.
    pub avg_power_w: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssReport {
    pub x_star: PopulationState,
    pub epsilon_star: f64,
    pub epsilon_zero_denominator: bool,
    pub jacobian: JacobianCertificate,
    pub iterations: u64,
    pub converged: bool,
    /// `|xdot|_inf` at the last iterate, normalized scale.
    pub field_norm: f64,
    pub step_rule: StepRule,
    pub utilities_w: Vec<f64>,
    pub utilities_normalized: Vec<f64>,
    /// Fitness at `x_star`, normalized scale.
    pub fitness_normalized: Vec<f64>,
    pub mean_fitness_normalized: f64,
}

fn is_converged(x: &[f64], field: &ReplicatorField, cfg: &ReplicatorConfig) -> bool {
    if field.sup_norm() > cfg.tol {
        return false;
    }
    let gap_tol = cfg.tol * field.mean_fitness.abs();
    x.iter()
        .zip(&field.fitness)
        .all(|(xj, fj)| *xj <= cfg.tol || (fj - field.mean_fitness).abs() <= gap_tol)
}

fn project(x: &[f64], extinction: f64) -> Result<PopulationState> {
    PopulationState::from_unnormalized(x.iter().map(|v| if *v <= extinction { 0.0 } else { *v }).collect())
}

/// Iterate the replicator dynamics on `u` until the stopping rule holds or
/// `max_iters` steps have been taken.
pub fn solve_ess(u: &UtilityVector, cfg: &ReplicatorConfig) -> Result<(EssReport, RunTrace)> {
    cfg.validate()?;
    let n = u.len();
    let raw = u.as_slice();
    let norm = normalize_utilities(raw);
    let scale = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let to_watts = |normalized: f64| if scale == 0.0 { 0.0 } else { (normalized - 1.0) * scale };

    let mut x = match &cfg.init {
        Some(init) if init.len() != n => {
            return Err(Error::domain(format!("initial state has {} types, game has {n}", init.len())))
        }
        Some(init) => init.clone(),
        None => PopulationState::uniform(n)?,
    };

    let mut trace = RunTrace::default();
    let record = |iteration: u64, x: &[f64], field: &ReplicatorField| TraceRecord {
        iteration,
        x: x.to_vec(),
        mean_fitness_w: to_watts(field.mean_fitness),
        avg_power_w: -x.iter().zip(raw).map(|(a, b)| a * b).sum::<f64>(),
    };

    let mut iterations = 0;
    let mut converged = false;
    let mut field = replicator_field(&x, &norm)?;
    let mut last_logged = None;
    loop {
        if iterations % cfg.log_every == 0 {
            trace.records.push(record(iterations, &x, &field));
            last_logged = Some(iterations);
        }
        if is_converged(&x, &field, cfg) {
            converged = true;
            break;
        }
        if iterations >= cfg.max_iters {
            break;
        }
        let step = match cfg.step_rule {
            StepRule::Constant => cfg.step_eta,
            StepRule::FitnessScaled => {
                let spread = field.spread(&x);
                if spread > 0.0 {
                    cfg.step_eta / spread
                } else {
                    cfg.step_eta
                }
            }
        };
        x = advance(&x, &field.x_dot, step)?;
        iterations += 1;
        field = replicator_field(&x, &norm)?;
    }
    if last_logged != Some(iterations) {
        trace.records.push(record(iterations, &x, &field));
    }

    let x_star = project(&x, cfg.tol)?;
    let star_field = replicator_field(&x_star, &norm)?;
    let eps = epsilon_star(&x_star, &norm, &star_field.fitness)?;
    let report = EssReport {
        epsilon_star: eps.value,
        epsilon_zero_denominator: eps.zero_denominator,
        jacobian: jacobian_diagnostic(&x_star, &norm)?,
        iterations,
        converged,
        field_norm: field.sup_norm(),
        step_rule: cfg.step_rule,
        utilities_w: raw.to_vec(),
        utilities_normalized: norm,
        fitness_normalized: star_field.fitness,
        mean_fitness_normalized: star_field.mean_fitness,
        x_star,
    };
    Ok((report, trace))
}

/// Full pipeline for one scenario: utilities of every cluster type, then the
/// replicator run.
pub fn run_to_ess(
    strategy: &StrategySet,
    p: &RadioParams,
    src: &SourceModel,
    cfg: &ReplicatorConfig,
) -> Result<(EssReport, RunTrace)> {
    let u = utility_vector(strategy, p, src)?;
    solve_ess(&u, cfg)
}
