use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::geometry::{cluster_radius_for_size, max_cluster_radius, mean_interference, RadiusMode};
use crate::radio::{cellular_power, channel_gain, joint_entropy, RadioParams, SourceModel};

/// The pure strategies of the clustering game: cluster sizes `1..=N` and the
/// radius each size occupies at the scenario's device density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySet {
    lambda_m: f64,
    r_max_m: f64,
    radii: Vec<f64>,
}

impl StrategySet {
    /// Strategy set with `n_max` types at density `lambda_m`. `r_max_m` is
    /// informational (the ball radius that produced `n_max`).
    pub fn new(n_max: u64, lambda_m: f64, r_max_m: f64) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::domain("the strategy set needs at least one cluster type"));
        }
        if !(lambda_m > 0.0) || !lambda_m.is_finite() {
            return Err(Error::domain(format!("device density must be positive, got {lambda_m}")));
        }
        let radii = (1..=n_max).map(|j| cluster_radius_for_size(j, lambda_m)).collect();
        Ok(Self {
            lambda_m,
            r_max_m,
            radii,
        })
    }

    /// Build the strategy set from the maximum cluster radius of a scenario.
    pub fn for_scenario(lambda_m: f64, p: &RadioParams, src: &SourceModel, mode: RadiusMode) -> Result<Self> {
        let (r_max, n_max) = max_cluster_radius(lambda_m, src.entropy(), p, mode)?;
        Self::new(n_max, lambda_m, r_max)
    }

    pub fn n_max(&self) -> u64 {
        self.radii.len() as u64
    }

    pub fn lambda_m(&self) -> f64 {
        self.lambda_m
    }

    pub fn r_max_m(&self) -> f64 {
        self.r_max_m
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Radius of cluster type `j` (1-based).
    pub fn radius(&self, j: u64) -> Result<f64> {
        self.check_type(j)?;
        Ok(self.radii[(j - 1) as usize])
    }

    pub fn check_type(&self, j: u64) -> Result<()> {
        if j == 0 || j > self.n_max() {
            return Err(Error::domain(format!(
                "cluster type {j} is outside 1..={}",
                self.n_max()
            )));
        }
        Ok(())
    }
}

/// Per-type utilities in watts: the negated average transmit power per device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UtilityVector(Vec<f64>);

impl UtilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("utility vector is empty"));
        }
        if let Some(bad) = values.iter().find(|u| !u.is_finite() || **u > 0.0) {
            return Err(Error::domain(format!(
                "utilities are negated powers and must be finite and <= 0, got {bad}"
            )));
        }
        Ok(Self(values))
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

    /// Utility of cluster type `j` (1-based).
    pub fn get(&self, j: u64) -> Option<f64> {
        (j as usize).checked_sub(1).and_then(|i| self.0.get(i).copied())
    }
}

impl std::ops::Deref for UtilityVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Closed form of `sum_{k=1}^{j-1} Gamma(j) Gamma(k + nu/2) / (Gamma(k) Gamma(j + nu/2))`.
pub fn gamma_sum(j: u64, nu: f64) -> f64 {
    2.0 * j.saturating_sub(1) as f64 / (2.0 + nu)
}

/// The same sum evaluated term by term in log-Gamma arithmetic.
pub fn gamma_sum_explicit(j: u64, nu: f64) -> f64 {
    let jf = j as f64;
    let common = ln_gamma(jf) - ln_gamma(jf + 0.5 * nu);
    (1..j)
        .map(|k| {
            let kf = k as f64;
            (common + ln_gamma(kf + 0.5 * nu) - ln_gamma(kf)).exp()
        })
        .sum()
}

/// The two terms of a type's utility, both as positive powers in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityTerms {
    /// Expected M2M power summed over all members of the cluster.
    pub m2m_w: f64,
    /// Head's cellular power for the cluster's joint entropy.
    pub cellular_w: f64,
}

impl UtilityTerms {
    pub fn total_w(&self) -> f64 {
        self.m2m_w + self.cellular_w
    }
}

/// Expected M2M and cellular powers of a cluster of type `j`.
pub fn utility_terms(j: u64, strategy: &StrategySet, p: &RadioParams, src: &SourceModel) -> Result<UtilityTerms> {
    let r_j = strategy.radius(j)?;
    let h_m = src.entropy();
    let nu = p.pathloss_exponent;
    let m2m_w = if j == 1 {
        0.0
    } else {
        let interference = mean_interference(r_j, p.q_max_m2m_w, p)?;
        let path = (4.0 * std::f64::consts::PI * r_j / p.wavelength_m).powf(nu);
        path / (p.antenna_gain * p.fading_gain) * gamma_sum(j, nu) * interference * p.required_sinr(h_m)
    };
    let joint = joint_entropy(h_m, j, r_j, src.corr_constant_c)?;
    let cellular_w = cellular_power(joint, channel_gain(p.bs_distance_m, p)?, p)?;
    Ok(UtilityTerms { m2m_w, cellular_w })
}

/// Closed-form utility of cluster type `j`: minus the average transmit power
/// per device, M2M links plus the head's cellular uplink.
pub fn utility_closed_form(j: u64, strategy: &StrategySet, p: &RadioParams, src: &SourceModel) -> Result<f64> {
    let terms = utility_terms(j, strategy, p, src)?;
    Ok(-terms.total_w() / j as f64)
}

/// Utilities of every type in the strategy set.
pub fn utility_vector(strategy: &StrategySet, p: &RadioParams, src: &SourceModel) -> Result<UtilityVector> {
    let values = (1..=strategy.n_max())
        .map(|j| utility_closed_form(j, strategy, p, src))
        .collect::<Result<Vec<_>>>()?;
    UtilityVector::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::cellular_link;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_sum_small_cases() {
        for nu in [2.1, 2.5, 3.0, 3.5] {
            assert_relative_eq!(gamma_sum(2, nu), 2.0 / (2.0 + nu), max_relative = 1e-15);
            assert_relative_eq!(gamma_sum_explicit(2, nu), 1.0 / (1.0 + nu / 2.0), max_relative = 1e-12);
        }
        assert_relative_eq!(gamma_sum(3, 2.5), 0.888_888_888_888_889, max_relative = 1e-14);
        // Gamma(3) Gamma(2.25) / Gamma(4.25) = 2 / (3.25 * 2.25)
        // Gamma(3) Gamma(3.25) / (Gamma(2) Gamma(4.25)) = 2 / 3.25
        let terms = 2.0 / (3.25 * 2.25) + 2.0 / 3.25;
        assert!((gamma_sum_explicit(3, 2.5) - terms).abs() < 1e-9);
        assert!((terms - 0.888_888_888_888_889).abs() < 1e-12);
        assert_eq!(gamma_sum(1, 2.5), 0.0);
        assert_eq!(gamma_sum_explicit(1, 2.5), 0.0);
    }

    #[test]
    fn singleton_utility_is_plain_cellular() {
        let p = RadioParams::default();
        let src = SourceModel::default();
        let set = StrategySet::for_scenario(0.09, &p, &src, RadiusMode::FixedPoint).unwrap();
        let u1 = utility_closed_form(1, &set, &p, &src).unwrap();
        assert_eq!(u1, -cellular_link(src.entropy(), &p).unwrap().power_w);
        assert!(utility_closed_form(0, &set, &p, &src).is_err());
        assert!(utility_closed_form(set.n_max() + 1, &set, &p, &src).is_err());
    }

    #[test]
    fn m2m_term_is_radius_free() {
        // E(I_j) falls as r_j^-nu, cancelling the path-loss growth
        let p = RadioParams::default();
        let src = SourceModel::default();
        let nu = p.pathloss_exponent;
        let expected = |j: u64| {
            2.0 * p.q_max_m2m_w / (nu - 2.0) * 2.0 * (j - 1) as f64 / (2.0 + nu)
                * p.required_sinr(src.entropy())
        };
        for lambda in [0.045, 0.36] {
            let set = StrategySet::new(12, lambda, 1.0).unwrap();
            for j in 2..=12 {
                let t = utility_terms(j, &set, &p, &src).unwrap();
                assert_relative_eq!(t.m2m_w, expected(j), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn utility_vector_validates_sign() {
        assert!(UtilityVector::new(vec![-1.0, 0.5]).is_err());
        assert!(UtilityVector::new(vec![]).is_err());
        let u = UtilityVector::new(vec![-1.0, -2.0]).unwrap();
        assert_eq!(u.get(2), Some(-2.0));
        assert_eq!(u.get(0), None);
    }

    #[test]
    fn strategy_radii_increase() {
        let set = StrategySet::new(20, 0.18, 6.0).unwrap();
        assert!(set.radii().windows(2).all(|w| w[0] < w[1]));
        assert!(StrategySet::new(0, 0.18, 1.0).is_err());
    }
}
