//! Independent estimators used to check the closed forms.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{gamma_sum, gamma_sum_explicit, StrategySet};
use crate::geometry::{kth_distance_pdf, mean_interference, mc_interference};
use crate::numerics::{integrate, mean_and_std_error};
use crate::radio::{cellular_power, channel_gain, joint_entropy, m2m_power, RadioParams, SourceModel};
use crate::rng::StreamSeed;

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl Estimate {
    /// `|mean - reference|` in standard errors; 0 when both are exact.
    pub fn z_score(&self, reference: f64) -> f64 {
        let gap = (self.mean - reference).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.std_error
        }
    }
}

fn cellular_term(j: u64, r_j: f64, p: &RadioParams, src: &SourceModel) -> Result<f64> {
    let joint = joint_entropy(src.entropy(), j, r_j, src.corr_constant_c)?;
    cellular_power(joint, channel_gain(p.bs_distance_m, p)?, p)
}

/// Utility of type `j` by integrating the M2M power of each member against
/// its order-statistic distance law.
pub fn utility_quadrature(j: u64, strategy: &StrategySet, p: &RadioParams, src: &SourceModel) -> Result<f64> {
    let r_j = strategy.radius(j)?;
    let h_m = src.entropy();
    let interference = mean_interference(r_j, p.q_max_m2m_w, p)?;
    let mut m2m = 0.0;
    for k in 1..j {
        let integrand = |d: f64| {
            if d <= 0.0 {
                return 0.0;
            }
            let pdf = kth_distance_pdf(k, j, r_j, d).unwrap_or(0.0);
            let gain = channel_gain(d, p).unwrap_or(f64::INFINITY);
            pdf * m2m_power(h_m, gain, interference, p).unwrap_or(0.0)
        };
        m2m += integrate(integrand, 0.0, r_j, 0.0, 1e-13);
    }
    Ok(-(m2m + cellular_term(j, r_j, p, src)?) / j as f64)
}

/// `n` uniform-disk distances from the centre, sorted ascending.
pub fn sorted_disk_distances<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    let mut d: Vec<f64> = (0..n).map(|_| radius * rng.random::<f64>().sqrt()).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Brute-force draws of the `k`-th closest of `n - 1` uniform members.
pub fn kth_distance_samples(k: u64, n: u64, r_n: f64, draws: u64, stream: &StreamSeed) -> Result<Vec<f64>> {
    if k == 0 || k >= n {
        return Err(Error::domain(format!("order index {k} is outside 1..{n}")));
    }
    Ok((0..draws)
        .into_par_iter()
        .map(|t| sorted_disk_distances((n - 1) as usize, r_n, &mut stream.trial(t))[(k - 1) as usize])
        .collect())
}

/// Utility of type `j` as the sample mean of the negated per-device power of
/// clusters with independently drawn member positions.
pub fn utility_monte_carlo(
    j: u64,
    strategy: &StrategySet,
    p: &RadioParams,
    src: &SourceModel,
    draws: u64,
    stream: &StreamSeed,
) -> Result<Estimate> {
    if draws == 0 {
        return Err(Error::domain("need at least one draw"));
    }
    let r_j = strategy.radius(j)?;
    let h_m = src.entropy();
    let interference = mean_interference(r_j, p.q_max_m2m_w, p)?;
    let cellular = cellular_term(j, r_j, p, src)?;
    let samples = (0..draws)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = stream.trial(t);
            let mut m2m = 0.0;
            for d in sorted_disk_distances((j - 1) as usize, r_j, &mut rng) {
                m2m += m2m_power(h_m, channel_gain(d, p)?, interference, p)?;
            }
            Ok(-(m2m + cellular) / j as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, std_error) = mean_and_std_error(&samples);
    Ok(Estimate {
        mean,
        std_error,
        samples: draws,
    })
}

/// Largest gap between the explicit Gamma-ratio sum and its closed form.
pub fn gamma_sum_max_error(j_max: u64, nus: &[f64]) -> f64 {
    nus.iter()
        .flat_map(|&nu| (2..=j_max).map(move |j| (gamma_sum_explicit(j, nu) - gamma_sum(j, nu)).abs()))
        .fold(0.0, f64::max)
}

/// Monte Carlo versus closed-form mean interference at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceCheck {
    pub r_n: f64,
    pub analytic_w: f64,
    pub estimate: Estimate,
    pub rel_error: f64,
}

pub fn interference_check(r_n: f64, p: &RadioParams, trials: u64, stream: &StreamSeed) -> Result<InterferenceCheck> {
    let analytic_w = mean_interference(r_n, p.q_max_m2m_w, p)?;
    let mc = mc_interference(r_n, p.q_max_m2m_w, p, trials, stream)?;
    Ok(InterferenceCheck {
        r_n,
        analytic_w,
        estimate: Estimate {
            mean: mc.mean,
            std_error: mc.std_error,
            samples: trials,
        },
        rel_error: (mc.mean - analytic_w).abs() / analytic_w,
    })
}
