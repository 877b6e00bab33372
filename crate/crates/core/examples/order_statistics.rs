// Distance from a cluster head to its k-th closest member: the analytic law
// against brute-force sampling, with a Kolmogorov-Smirnov test.

use evoclust::geometry::{kth_distance_cdf, kth_distance_pdf};
use evoclust::numerics::{integrate, ks_test};
use evoclust::rng::{tags, StreamSeed};
use evoclust::validation::kth_distance_samples;

pub fn run_example() -> evoclust::Result<()> {
    let r_n = 4.0;
    let stream = StreamSeed::new(7, tags::ORDER_STATISTICS);
    for (k, n) in [(1, 2), (2, 5), (4, 5)] {
        let mass = integrate(|d| kth_distance_pdf(k, n, r_n, d).unwrap_or(0.0), 0.0, r_n, 1e-12, 1e-12);
        let samples = kth_distance_samples(k, n, r_n, 20_000, &stream.child(k * 100 + n))?;
        let ks = ks_test(&samples, |d| kth_distance_cdf(k, n, r_n, d).unwrap_or(f64::NAN));
        println!(
            "k = {k}, n = {n}: pdf mass {mass:.9}, KS statistic {:.4}, p-value {:.3}",
            ks.statistic, ks.p_value
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> evoclust::Result<()> {
    run_example()
}
