//! Replicator dynamics under the pairwise-max fitness.
//!
//! Indices into utility and state slices are 0-based here; cluster type `j`
//! lives at index `j - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum x = 1` for a valid population state.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Share of the device population preferring each cluster type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PopulationState(Vec<f64>);

impl PopulationState {
    pub fn new(shares: Vec<f64>) -> Result<Self> {
        if shares.is_empty() {
            return Err(Error::domain("population state is empty"));
        }
        if let Some(bad) = shares.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::domain(format!("population share {bad} is outside [0, 1]")));
        }
        let total: f64 = shares.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::domain(format!("population shares sum to {total}, not 1")));
        }
        Ok(Self(shares))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("population state needs at least one type"));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    /// Every device prefers cluster type `j` (1-based).
    pub fn pure(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::domain(format!("cluster type {j} is outside 1..={n}")));
        }
        let mut shares = vec![0.0; n];
        shares[j - 1] = 1.0;
        Ok(Self(shares))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Clip negative shares to zero and rescale onto the simplex.
    pub(crate) fn from_unnormalized(mut shares: Vec<f64>) -> Result<Self> {
        for s in shares.iter_mut() {
            if *s < 0.0 {
                *s = 0.0;
            }
        }
        let total: f64 = shares.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::domain("population state collapsed to zero mass"));
        }
        for s in shares.iter_mut() {
            *s = (*s / total).min(1.0);
        }
        Ok(Self(shares))
    }
}

impl std::ops::Deref for PopulationState {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Payoff a type-`a` cluster receives when matched against type `b`: the
/// larger of the two utilities.
pub fn pairwise_utility(a: usize, b: usize, u: &[f64]) -> f64 {
    u[a].max(u[b])
}

/// Fitness of every type: `fit_j = sum_k max(u_j, u_k) x_k`.
pub fn fitness(x: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    if x.len() != u.len() {
        return Err(Error::domain(format!(
            "state has {} types but utilities have {}",
            x.len(),
            u.len()
        )));
    }
    Ok((0..u.len())
        .map(|j| (0..u.len()).map(|k| pairwise_utility(j, k, u) * x[k]).sum())
        .collect())
}

/// Population-average fitness `U = sum_j fit_j x_j`.
pub fn mean_fitness(x: &[f64], fit: &[f64]) -> f64 {
    x.iter().zip(fit).map(|(xj, fj)| xj * fj).sum()
}

/// Replicator vector field at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicatorField {
    pub fitness: Vec<f64>,
    pub mean_fitness: f64,
    /// `x_j (fit_j - U)`
    pub x_dot: Vec<f64>,
}

impl ReplicatorField {
    pub fn sup_norm(&self) -> f64 {
        self.x_dot.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest fitness gap `|fit_j - U|` among types still present.
    pub fn spread(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.fitness)
            .filter(|(xj, _)| **xj > 0.0)
            .fold(0.0, |m, (_, f)| m.max((f - self.mean_fitness).abs()))
    }
}

pub fn replicator_field(x: &[f64], u: &[f64]) -> Result<ReplicatorField> {
    let fit = fitness(x, u)?;
    let mean = mean_fitness(x, &fit);
    let x_dot = x.iter().zip(&fit).map(|(xj, fj)| xj * (fj - mean)).collect();
    Ok(ReplicatorField {
        fitness: fit,
        mean_fitness: mean,
        x_dot,
    })
}

/// How the Euler step length is chosen each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `x + eta * x_dot`.
    Constant,
    /// `x + (eta / spread) * x_dot`, where `spread` is the largest fitness gap
    /// among surviving types. Same orbits as the constant rule, but each
    /// share changes by at most a factor `1 +- eta` per step.
    #[default]
    FitnessScaled,
}

impl std::str::FromStr for StepRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "constant" => Ok(StepRule::Constant),
            "fitness_scaled" => Ok(StepRule::FitnessScaled),
            other => Err(format!("unknown step rule `{other}` (constant | fitness_scaled)")),
        }
    }
}

impl std::fmt::Display for StepRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepRule::Constant => "constant",
            StepRule::FitnessScaled => "fitness_scaled",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicatorConfig {
    pub step_eta: f64,
    pub step_rule: StepRule,
    pub max_iters: u64,
    /// Bound on `|x_dot|_inf`, and on the relative fitness gap of surviving
    /// types, at convergence. Shares at or below `tol` count as extinct.
    pub tol: f64,
    /// Record one trace row every this many iterations.
    pub log_every: u64,
    /// Initial state; uniform over all types when `None`.
    pub init: Option<PopulationState>,
}

impl Default for ReplicatorConfig {
    fn default() -> Self {
        Self {
            step_eta: 0.5,
            step_rule: StepRule::FitnessScaled,
            max_iters: 100_000,
            tol: 1e-10,
            log_every: 1,
            init: None,
        }
    }
}

impl ReplicatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_eta > 0.0) || !self.step_eta.is_finite() {
            return Err(Error::domain(format!("step size must be positive, got {}", self.step_eta)));
        }
        if self.step_rule == StepRule::FitnessScaled && self.step_eta >= 1.0 {
            return Err(Error::domain("fitness-scaled steps need eta < 1 to keep shares positive"));
        }
        if !(self.tol > 0.0) || self.tol >= 1.0 {
            return Err(Error::domain(format!("tolerance must lie in (0, 1), got {}", self.tol)));
        }
        if self.log_every == 0 {
            return Err(Error::domain("log interval must be at least 1"));
        }
        Ok(())
    }
}

/// One explicit Euler step `x + eta * x_dot`, clipped at zero and
/// renormalized. Returns the next state and the field `x_dot` at `x`.
pub fn replicator_step(x: &PopulationState, u: &[f64], eta: f64) -> Result<(PopulationState, Vec<f64>)> {
    let field = replicator_field(x, u)?;
    let next = advance(x, &field.x_dot, eta)?;
    Ok((next, field.x_dot))
}

pub(crate) fn advance(x: &[f64], x_dot: &[f64], step: f64) -> Result<PopulationState> {
    let raw = x.iter().zip(x_dot).map(|(xj, dj)| xj + step * dj).collect();
    PopulationState::from_unnormalized(raw)
}
