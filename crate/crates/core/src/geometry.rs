//! Point-process sampling, order-statistic distance laws and inter-cluster
//! interference around a typical cluster head.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::mean_and_std_error;
use crate::radio::{Fading, RadioParams};
use crate::rng::StreamSeed;

/// Relative slack applied before flooring a mean device count, so that
/// `floor(lambda * pi * r_j^2) == j` survives rounding dust.
pub const FLOOR_SLACK: f64 = 1e-9;

/// Monte Carlo interferers are sampled out to this multiple of the cluster
/// radius; the mean beyond it is added in closed form.
pub const DEFAULT_TRUNCATION_FACTOR: f64 = 100.0;

/// A planar sampling window centred on a cluster head.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Region {
    Disk { center: (f64, f64), radius: f64 },
    Annulus { center: (f64, f64), inner: f64, outer: f64 },
}

impl Region {
    pub fn disk(radius: f64) -> Self {
        Region::Disk {
            center: (0.0, 0.0),
            radius,
        }
    }

    pub fn annulus(inner: f64, outer: f64) -> Self {
        Region::Annulus {
            center: (0.0, 0.0),
            inner,
            outer,
        }
    }

    fn bounds(&self) -> ((f64, f64), f64, f64) {
        match *self {
            Region::Disk { center, radius } => (center, 0.0, radius),
            Region::Annulus { center, inner, outer } => (center, inner, outer),
        }
    }

    pub fn area(&self) -> f64 {
        let (_, inner, outer) = self.bounds();
        PI * (outer * outer - inner * inner)
    }

    pub fn contains(&self, point: (f64, f64)) -> bool {
        let ((cx, cy), inner, outer) = self.bounds();
        let r = (point.0 - cx).hypot(point.1 - cy);
        r >= inner * (1.0 - 1e-12) && r <= outer * (1.0 + 1e-12)
    }

    fn validate(&self) -> Result<()> {
        let (_, inner, outer) = self.bounds();
        if !outer.is_finite() {
            return Err(Error::domain(
                "sampling region has infinite area; truncate it first",
            ));
        }
        if !(inner >= 0.0) || !(outer >= inner) {
            return Err(Error::domain(format!(
                "invalid region radii: inner {inner}, outer {outer}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarPointSample {
    pub points: Vec<(f64, f64)>,
    pub region: Region,
    pub intensity: f64,
}

impl PlanarPointSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distances of every point from the region centre.
    pub fn radii(&self) -> Vec<f64> {
        let ((cx, cy), _, _) = self.region.bounds();
        self.points.iter().map(|&(x, y)| (x - cx).hypot(y - cy)).collect()
    }
}

/// Draw one realization of a homogeneous Poisson point process with the given
/// intensity (points per square meter) over `region`.
pub fn sample_ppp<R: Rng + ?Sized>(
    intensity: f64,
    region: Region,
    rng: &mut R,
) -> Result<PlanarPointSample> {
    if !(intensity > 0.0) || !intensity.is_finite() {
        return Err(Error::domain(format!(
            "point-process intensity must be positive, got {intensity}"
        )));
    }
    region.validate()?;
    let count = poisson_count(intensity * region.area(), rng)?;
    let ((cx, cy), inner, outer) = region.bounds();
    let (inner2, outer2) = (inner * inner, outer * outer);
    let points = (0..count)
        .map(|_| {
            let r = (inner2 + rng.random::<f64>() * (outer2 - inner2)).sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            (cx + r * theta.cos(), cy + r * theta.sin())
        })
        .collect();
    Ok(PlanarPointSample {
        points,
        region,
        intensity,
    })
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let law = Poisson::new(mean)
        .map_err(|e| Error::domain(format!("Poisson mean {mean} rejected: {e}")))?;
    Ok(law.sample(rng) as u64)
}

fn check_order_index(k: u64, n: u64) -> Result<()> {
    if k < 1 || n < 2 || k > n - 1 {
        return Err(Error::domain(format!(
            "order index k={k} is outside 1..={} for cluster size {n}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// `(n-1)! / ((k-1)! (n-1-k)!)`, the leading constant of the k-th order
/// statistic density among `n - 1` members.
fn order_statistic_constant(k: u64, n: u64) -> f64 {
    // k * C(n-1, k), built multiplicatively
    let m = n - 1;
    let small = k.min(m - k);
    let mut binom = 1.0f64;
    for i in 0..small {
        binom = binom * (m - i) as f64 / (i + 1) as f64;
    }
    k as f64 * binom
}

/// Density of the distance from a cluster head to its k-th closest member,
/// when the `n - 1` members are uniform over the disk of radius `r_n`.
///
/// Returns 0 outside `[0, r_n]`.
pub fn kth_distance_pdf(k: u64, n: u64, r_n: f64, d: f64) -> Result<f64> {
    check_order_index(k, n)?;
    if !(r_n > 0.0) {
        return Err(Error::domain(format!("cluster radius must be positive, got {r_n}")));
    }
    if !(0.0..=r_n).contains(&d) {
        return Ok(0.0);
    }
    let base_pdf = 2.0 * d / (r_n * r_n);
    let base_cdf = d * d / (r_n * r_n);
    Ok(order_statistic_constant(k, n)
        * base_cdf.powi((k - 1) as i32)
        * base_pdf
        * (1.0 - base_cdf).powi((n - 1 - k) as i32))
}

/// CDF of the k-th closest member distance, via the regularized incomplete
/// beta function `I_{d^2/r_n^2}(k, n - k)`.
pub fn kth_distance_cdf(k: u64, n: u64, r_n: f64, d: f64) -> Result<f64> {
    check_order_index(k, n)?;
    if !(r_n > 0.0) {
        return Err(Error::domain(format!("cluster radius must be positive, got {r_n}")));
    }
    if d <= 0.0 {
        return Ok(0.0);
    }
    if d >= r_n {
        return Ok(1.0);
    }
    let x = d * d / (r_n * r_n);
    Ok(statrs::function::beta::beta_reg(k as f64, (n - k) as f64, x))
}

/// Draw the k-th smallest of `n - 1` uniform-disk distances.
pub fn sample_kth_distance<R: Rng + ?Sized>(k: u64, n: u64, r_n: f64, rng: &mut R) -> Result<f64> {
    check_order_index(k, n)?;
    let mut distances: Vec<f64> = (0..n - 1).map(|_| r_n * rng.random::<f64>().sqrt()).collect();
    let idx = (k - 1) as usize;
    let (_, kth, _) = distances.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*kth)
}

/// Mean interference at the head from a PPP of transmitters with intensity
/// `lambda` (per m^2) outside the disk of radius `r_inner`, each sending at `q` W.
pub fn field_interference(lambda: f64, r_inner: f64, q: f64, p: &RadioParams) -> Result<f64> {
    let nu = check_exponent(p)?;
    if !(r_inner > 0.0) || !(lambda >= 0.0) {
        return Err(Error::domain(format!(
            "field interference needs r > 0 and lambda >= 0 (got r={r_inner}, lambda={lambda})"
        )));
    }
    Ok(q * p.gain_prefactor() * lambda * 2.0 * PI * r_inner.powf(2.0 - nu) / (nu - 2.0))
}

/// Mean inter-cluster interference at a typical head of a cluster of radius
/// `r_n`, with one co-channel interferer per cluster (intensity `1/(pi r_n^2)`).
pub fn mean_interference(r_n: f64, q: f64, p: &RadioParams) -> Result<f64> {
    let nu = check_exponent(p)?;
    if !(r_n > 0.0) {
        return Err(Error::domain(format!("cluster radius must be positive, got {r_n}")));
    }
    Ok(2.0 * q * p.gain_prefactor() / (r_n.powf(nu) * (nu - 2.0)))
}

fn check_exponent(p: &RadioParams) -> Result<f64> {
    let nu = p.pathloss_exponent;
    if nu <= 2.0 {
        return Err(Error::domain(format!(
            "mean interference diverges for path-loss exponent {nu} <= 2"
        )));
    }
    Ok(nu)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub truncation_radius: f64,
    pub tail_correction: f64,
}

/// Monte Carlo estimate of [`mean_interference`]: sample the interferer PPP on
/// the annulus `[r_n, 100 r_n]`, sum received powers, and add the analytic
/// mean of the field beyond the truncation radius.
pub fn mc_interference(
    r_n: f64,
    q: f64,
    p: &RadioParams,
    trials: u64,
    stream: &StreamSeed,
) -> Result<InterferenceEstimate> {
    mc_interference_truncated(r_n, q, p, trials, DEFAULT_TRUNCATION_FACTOR, stream)
}

/// [`mc_interference`] with an explicit truncation factor (`R_max = factor * r_n`).
pub fn mc_interference_truncated(
    r_n: f64,
    q: f64,
    p: &RadioParams,
    trials: u64,
    truncation_factor: f64,
    stream: &StreamSeed,
) -> Result<InterferenceEstimate> {
    let nu = check_exponent(p)?;
    if trials == 0 {
        return Err(Error::domain("Monte Carlo needs at least one trial"));
    }
    if !(r_n > 0.0) || !(truncation_factor >= 1.0) {
        return Err(Error::domain(format!(
            "need r_n > 0 and truncation factor >= 1 (got {r_n}, {truncation_factor})"
        )));
    }
    let lambda = 1.0 / (PI * r_n * r_n);
    let r_max = truncation_factor * r_n;
    let tail = field_interference(lambda, r_max, q, p)?;
    let scale = q * p.gain_prefactor();
    let (inner2, outer2) = (r_n * r_n, r_max * r_max);
    let expected_count = lambda * PI * (outer2 - inner2);
    let rayleigh = p.fading == Fading::Rayleigh;

    let samples = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<f64> {
            let mut rng = stream.trial(trial);
            let count = poisson_count(expected_count, &mut rng)?;
            let mut sum = 0.0;
            for _ in 0..count {
                let dist2 = inner2 + rng.random::<f64>() * (outer2 - inner2);
                let fade: f64 = if rayleigh { Exp1.sample(&mut rng) } else { 1.0 };
                sum += fade * dist2.powf(-0.5 * nu);
            }
            Ok(scale * sum)
        })
        .collect::<Result<Vec<f64>>>()?;

    let (annulus_mean, std_error) = mean_and_std_error(&samples);
    Ok(InterferenceEstimate {
        mean: annulus_mean + tail,
        std_error,
        trials,
        truncation_radius: r_max,
        tail_correction: tail,
    })
}

/// Expected device count `floor(lambda * pi * r^2)` with rounding slack.
pub fn devices_in_radius(lambda_m: f64, r: f64) -> u64 {
    (lambda_m * PI * r * r * (1.0 + FLOOR_SLACK)).floor() as u64
}

/// Smallest radius whose mean device count is `j`.
pub fn cluster_radius_for_size(j: u64, lambda_m: f64) -> f64 {
    (j as f64 / (lambda_m * PI)).sqrt()
}

/// How the maximum cluster radius is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum RadiusMode {
    /// Fixed point of the M2M range bound under an all-device interferer
    /// field of intensity `lambda_m` outside the radius.
    #[default]
    FixedPoint,
    /// Use the given radius verbatim.
    Override(f64),
}

/// Maximum cluster radius `r_N` and the resulting maximum cluster size `N`.
pub fn max_cluster_radius(
    lambda_m: f64,
    h_m: f64,
    p: &RadioParams,
    mode: RadiusMode,
) -> Result<(f64, u64)> {
    let nu = check_exponent(p)?;
    if !(lambda_m > 0.0) {
        return Err(Error::domain(format!("device density must be positive, got {lambda_m}")));
    }
    let radius = match mode {
        RadiusMode::Override(r) => {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::domain(format!("radius override must be positive, got {r}")));
            }
            r
        }
        RadiusMode::FixedPoint => {
            ((nu - 2.0) / (2.0 * PI * lambda_m * p.required_sinr(h_m))).sqrt()
        }
    };
    let count = devices_in_radius(lambda_m, radius);
    if count == 0 {
        return Err(Error::DegenerateGeometry {
            radius_m: radius,
            count,
            lambda_m,
        });
    }
    Ok((radius, count))
}
