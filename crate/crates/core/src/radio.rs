//! Link-budget and information-content formulas for a single cluster.
//!
//! Internally every power is in linear watts, every distance in meters and
//! every information quantity in bits. dBm only appears at I/O boundaries
//! through [`dbm_to_watts`] and [`watts_to_dbm`].

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Convert a power level in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Convert watts to dBm. Only strictly positive powers have a dBm value.
pub fn watts_to_dbm(watts: f64) -> Result<f64> {
    if !(watts > 0.0) || !watts.is_finite() {
        return Err(Error::domain(format!(
            "cannot express {watts} W in dBm (power must be positive and finite)"
        )));
    }
    Ok(10.0 * watts.log10() + 30.0)
}

/// Convert a gain in dB to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// How the small-scale fading attenuation is treated.
///
/// Analytical formulas always use the mean gain `fading_gain`; the Rayleigh
/// variant only changes Monte Carlo estimators, which then draw a unit-mean
/// exponential power gain per link and scale it by `fading_gain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Fading {
    #[default]
    Deterministic,
    Rayleigh,
}

/// Physical-layer constants shared by every link in the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    /// Resource-block bandwidth `B` (Hz).
    pub bandwidth_hz: f64,
    /// Slot duration `T` (s).
    pub slot_s: f64,
    /// Thermal noise power spectral density `N0` (W/Hz).
    pub noise_density_w_per_hz: f64,
    /// Cellular transmit power cap (W).
    pub p_max_cell_w: f64,
    /// Device-to-device transmit power cap (W).
    pub q_max_m2m_w: f64,
    /// Combined transmit/receive antenna gain, linear.
    pub antenna_gain: f64,
    /// Carrier wavelength (m).
    pub wavelength_m: f64,
    /// Path-loss exponent, must exceed 2.
    pub pathloss_exponent: f64,
    /// Mean fading power gain, linear.
    pub fading_gain: f64,
    pub fading: Fading,
    /// Distance from a cluster head to the base station (m).
    pub bs_distance_m: f64,
}

impl Default for RadioParams {
    /// The base scenario: 180 kHz blocks, 1 ms slots, -176 dBm/Hz noise,
    /// 35/20 dBm caps, 9.54 dB antenna gain, 2 GHz carrier and exponent 2.5.
    fn default() -> Self {
        Self {
            bandwidth_hz: 180e3,
            slot_s: 1e-3,
            noise_density_w_per_hz: dbm_to_watts(-176.0),
            p_max_cell_w: dbm_to_watts(35.0),
            q_max_m2m_w: dbm_to_watts(20.0),
            antenna_gain: db_to_linear(9.54),
            wavelength_m: 0.15,
            pathloss_exponent: 2.5,
            fading_gain: 1.0,
            fading: Fading::Deterministic,
            bs_distance_m: 500.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("bandwidth_hz", self.bandwidth_hz),
            ("slot_s", self.slot_s),
            ("noise_density_w_per_hz", self.noise_density_w_per_hz),
            ("p_max_cell_w", self.p_max_cell_w),
            ("q_max_m2m_w", self.q_max_m2m_w),
            ("antenna_gain", self.antenna_gain),
            ("wavelength_m", self.wavelength_m),
            ("pathloss_exponent", self.pathloss_exponent),
            ("fading_gain", self.fading_gain),
            ("bs_distance_m", self.bs_distance_m),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.pathloss_exponent <= 2.0 {
            return Err(Error::domain(format!(
                "path-loss exponent must exceed 2, got {}",
                self.pathloss_exponent
            )));
        }
        Ok(())
    }

    pub fn with_pathloss(mut self, nu: f64) -> Self {
        self.pathloss_exponent = nu;
        self
    }

    /// Bits carried per unit spectral efficiency in one slot, `T * B`.
    pub fn time_bandwidth(&self) -> f64 {
        self.slot_s * self.bandwidth_hz
    }

    /// SINR needed to push `bits` through one resource block in one slot,
    /// `2^(bits / TB) - 1`.
    pub fn required_sinr(&self, bits: f64) -> f64 {
        (bits / self.time_bandwidth()).exp2() - 1.0
    }

    /// The distance-independent part of the path gain, `xi * A_t * (4 pi / mu)^(-nu)`.
    pub(crate) fn gain_prefactor(&self) -> f64 {
        self.fading_gain
            * self.antenna_gain
            * (4.0 * PI / self.wavelength_m).powf(-self.pathloss_exponent)
    }
}

/// Parameters of the Gaussian field each device quantizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    pub sigma: f64,
    pub mean: f64,
    /// Quantization step, in source units.
    pub delta: f64,
    /// Correlation constant `c` of the joint-entropy model (m).
    pub corr_constant_c: f64,
    /// Correlation factor `kappa` of the covariance model (m).
    pub corr_factor_kappa: f64,
}

impl Default for SourceModel {
    fn default() -> Self {
        Self {
            sigma: 10.0,
            mean: 0.0,
            delta: 1.0 / 256.0,
            corr_constant_c: 6.0,
            corr_factor_kappa: 6.0,
        }
    }
}

impl SourceModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sigma", self.sigma),
            ("delta", self.delta),
            ("corr_constant_c", self.corr_constant_c),
            ("corr_factor_kappa", self.corr_factor_kappa),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::domain(format!(
                    "source {name} must be positive and finite, got {value}"
                )));
            }
        }
        if !self.mean.is_finite() {
            return Err(Error::domain("source mean must be finite"));
        }
        Ok(())
    }

    pub fn with_corr_constant(mut self, c: f64) -> Self {
        self.corr_constant_c = c;
        self
    }

    pub fn entropy(&self) -> f64 {
        source_entropy(self)
    }
}

/// Output of a single link evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetResult {
    pub power_w: f64,
    pub gain: f64,
    pub bits: f64,
}

/// Entropy in bits of one device's finely quantized Gaussian reading.
pub fn source_entropy(src: &SourceModel) -> f64 {
    0.5 * (2.0 * PI * E * src.sigma * src.sigma / (src.delta * src.delta)).log2()
}

/// `log2(e) / log2(2 pi e)`, the correlation weight of the joint-entropy model.
pub fn correlation_alpha() -> f64 {
    E.log2() / (2.0 * PI * E).log2()
}

fn check_cluster_size(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("cluster size must be at least 1"))
    } else {
        Ok(())
    }
}

/// Worst-case joint entropy of `n` correlated readings when every member sits
/// at distance `r_n` from the head.
pub fn joint_entropy(h_m: f64, n: u64, r_n: f64, c: f64) -> Result<f64> {
    check_cluster_size(n)?;
    if !(r_n >= 0.0) || !(c > 0.0) {
        return Err(Error::domain(format!(
            "joint entropy needs r_n >= 0 and c > 0 (got r_n={r_n}, c={c})"
        )));
    }
    let others = (n - 1) as f64;
    Ok(h_m + h_m * others * (1.0 - correlation_alpha() / (r_n / c + 1.0)))
}

/// Bits the cluster head can drop before relaying: `n h_m - H_K`.
///
/// Evaluated from the discount term directly rather than by subtraction.
pub fn redundant_bits(h_m: f64, n: u64, r_n: f64, c: f64) -> Result<f64> {
    check_cluster_size(n)?;
    if !(r_n >= 0.0) || !(c > 0.0) {
        return Err(Error::domain(format!(
            "redundant bits need r_n >= 0 and c > 0 (got r_n={r_n}, c={c})"
        )));
    }
    let others = (n - 1) as f64;
    Ok(h_m * others * correlation_alpha() / (r_n / c + 1.0))
}

/// Path gain `xi * A_t * (4 pi d / mu)^(-nu)` at distance `d`.
pub fn channel_gain(d: f64, p: &RadioParams) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::domain(format!(
            "channel gain is undefined at distance {d} m"
        )));
    }
    Ok(p.fading_gain
        * p.antenna_gain
        * (4.0 * PI * d / p.wavelength_m).powf(-p.pathloss_exponent))
}

/// Cellular transmit power needed to deliver `h` bits in one slot over a
/// noise-limited link with gain `gain`.
pub fn cellular_power(h: f64, gain: f64, p: &RadioParams) -> Result<f64> {
    if !(gain > 0.0) {
        return Err(Error::domain(format!("cellular gain must be positive, got {gain}")));
    }
    if !(h >= 0.0) {
        return Err(Error::domain(format!("bit count must be non-negative, got {h}")));
    }
    Ok(p.bandwidth_hz * p.noise_density_w_per_hz / gain * p.required_sinr(h))
}

/// Device-to-head transmit power on an interference-limited link. Thermal
/// noise is ignored on these links.
pub fn m2m_power(h: f64, gain: f64, interference: f64, p: &RadioParams) -> Result<f64> {
    if !(gain > 0.0) {
        return Err(Error::domain(format!("M2M gain must be positive, got {gain}")));
    }
    if !(interference >= 0.0) {
        return Err(Error::domain(format!(
            "interference must be non-negative, got {interference}"
        )));
    }
    Ok(interference / gain * p.required_sinr(h))
}

/// Longest device-to-head distance over which `h` bits still fit at the M2M
/// power cap under interference `interference`.
pub fn max_m2m_distance(p: &RadioParams, h: f64, interference: f64) -> Result<f64> {
    if !(interference > 0.0) {
        return Err(Error::domain(
            "maximum M2M distance is unbounded without interference",
        ));
    }
    let inv_nu = 1.0 / p.pathloss_exponent;
    let numerator = p.wavelength_m * (p.q_max_m2m_w * p.fading_gain * p.antenna_gain).powf(inv_nu);
    let denominator = 4.0 * PI * (p.required_sinr(h) * interference).powf(inv_nu);
    Ok(numerator / denominator)
}

/// Cellular link from a head at `bs_distance_m` carrying `bits`.
pub fn cellular_link(bits: f64, p: &RadioParams) -> Result<LinkBudgetResult> {
    let gain = channel_gain(p.bs_distance_m, p)?;
    Ok(LinkBudgetResult {
        power_w: cellular_power(bits, gain, p)?,
        gain,
        bits,
    })
}

/// M2M link from a member at distance `d` carrying `bits`.
pub fn m2m_link(bits: f64, d: f64, interference: f64, p: &RadioParams) -> Result<LinkBudgetResult> {
    let gain = channel_gain(d, p)?;
    Ok(LinkBudgetResult {
        power_w: m2m_power(bits, gain, interference, p)?,
        gain,
        bits,
    })
}

/// Total power of one cluster: every member's M2M uplink to the head plus the
/// head's cellular uplink of the compressed joint data.
///
/// `member_distances` holds the `n - 1` member-to-head distances, each in
/// `(0, r_n]`.
pub fn cluster_total_power(
    member_distances: &[f64],
    h_m: f64,
    n: u64,
    r_n: f64,
    interference: f64,
    p: &RadioParams,
    src: &SourceModel,
) -> Result<f64> {
    check_cluster_size(n)?;
    if member_distances.len() as u64 != n - 1 {
        return Err(Error::domain(format!(
            "a cluster of {n} devices has {} members, got {} distances",
            n - 1,
            member_distances.len()
        )));
    }
    let mut m2m = 0.0;
    for &d in member_distances {
        if d > r_n {
            return Err(Error::domain(format!(
                "member at {d} m lies outside the cluster radius {r_n} m"
            )));
        }
        m2m += m2m_link(h_m, d, interference, p)?.power_w;
    }
    let joint = joint_entropy(h_m, n, r_n, src.corr_constant_c)?;
    Ok(m2m + cellular_link(joint, p)?.power_w)
}

/// Covariance between two readings `d` meters apart, `sqrt(kappa / (kappa + d))`.
///
/// The joint-entropy model uses the correlation constant instead, so this
/// never feeds the utility.
pub fn covariance_entry(d: f64, kappa: f64) -> Result<f64> {
    if !(d >= 0.0) || !(kappa > 0.0) {
        return Err(Error::domain(format!(
            "covariance needs d >= 0 and kappa > 0 (got d={d}, kappa={kappa})"
        )));
    }
    Ok((kappa / (kappa + d)).sqrt())
}
