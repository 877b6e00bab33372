use evoclust::game::{run_to_ess, ReplicatorConfig, StrategySet};
use evoclust::geometry::{
    field_interference, kth_distance_cdf, max_cluster_radius, mc_interference, mean_interference, sample_kth_distance,
    sample_ppp, RadiusMode, Region,
};
use evoclust::numerics::{ks_test, mean_and_std_error};
use evoclust::radio::{channel_gain, m2m_power, RadioParams, SourceModel};
use evoclust::rng::{tags, StreamSeed};
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

fn chi_square_p_value(observed: &[f64], expected: &[f64]) -> f64 {
    let stat: f64 = observed.iter().zip(expected).map(|(o, e)| (o - e).powi(2) / e).sum();
    ChiSquared::new((observed.len() - 1) as f64).unwrap().sf(stat)
}

#[test]
fn ppp_count_mean_and_distribution() {
    let draws = 10_000u64;
    let stream = StreamSeed::new(11, tags::PPP);
    let counts: Vec<u64> = (0..draws)
        .map(|t| sample_ppp(1.0, Region::disk(3.0), &mut stream.trial(t)).unwrap().len() as u64)
        .collect();
    let as_f64: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let (mean, se) = mean_and_std_error(&as_f64);
    let expected_mean = 9.0 * std::f64::consts::PI;
    assert!((expected_mean - 28.274333882308138).abs() < 1e-12);
    assert!((mean - expected_mean).abs() <= 3.0 * se, "mean {mean} se {se}");

    // Pool the tails so every cell expects at least five draws.
    let law = Poisson::new(expected_mean).unwrap();
    let (lo, hi) = (16u64, 42u64);
    let mut observed = vec![0.0; (hi - lo + 1) as usize];
    for &c in &counts {
        observed[(c.clamp(lo, hi) - lo) as usize] += 1.0;
    }
    let mut expected: Vec<f64> = (lo..=hi).map(|k| draws as f64 * law.pmf(k)).collect();
    expected[0] = draws as f64 * law.cdf(lo);
    *expected.last_mut().unwrap() = draws as f64 * (1.0 - law.cdf(hi - 1));
    assert!(expected.iter().all(|&e| e >= 5.0));
    let p = chi_square_p_value(&observed, &expected);
    assert!(p > 0.01, "chi-square p = {p}");
}

#[test]
fn ppp_radii_are_area_uniform() {
    let stream = StreamSeed::new(12, tags::PPP);
    let mut u = Vec::new();
    for t in 0..500 {
        let s = sample_ppp(0.5, Region::disk(5.0), &mut stream.trial(t)).unwrap();
        u.extend(s.radii().iter().map(|r| r * r / 25.0));
    }
    assert!(u.len() > 10_000);
    let ks = ks_test(&u, |v| v.clamp(0.0, 1.0));
    assert!(ks.passes(0.01), "{ks:?}");
}

#[test]
fn second_order_statistic_histogram() {
    let (k, n, r) = (2u64, 5u64, 4.0);
    let draws = 1_000_000u64;
    let stream = StreamSeed::new(13, tags::ORDER_STATISTICS);
    let bins = 20usize;
    // Probability-integral transform: equiprobable cells under the exact law.
    let mut observed = vec![0.0; bins];
    for t in 0..draws {
        let d = sample_kth_distance(k, n, r, &mut stream.trial(t)).unwrap();
        let u = kth_distance_cdf(k, n, r, d).unwrap();
        observed[((u * bins as f64) as usize).min(bins - 1)] += 1.0;
    }
    let expected = vec![draws as f64 / bins as f64; bins];
    assert!(expected.iter().all(|&e| e >= 5.0));
    let p = chi_square_p_value(&observed, &expected);
    assert!(p > 0.01, "chi-square p = {p}");
}

#[test]
fn interference_estimator_is_unbiased_over_random_parameters() {
    let mut pick = StreamSeed::new(14, 0xabc).trial(0);
    let root = StreamSeed::new(14, tags::INTERFERENCE);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let nu = pick.random_range(2.3..4.0);
        let r_n = pick.random_range(0.5..8.0);
        let q = pick.random_range(1e-4..1e-2);
        let p = RadioParams::default().with_pathloss(nu);
        let analytic = mean_interference(r_n, q, &p).unwrap();
        let mc = mc_interference(r_n, q, &p, 10_000, &root.child(i)).unwrap();
        let z = (mc.mean - analytic).abs() / mc.std_error;
        worst = worst.max(z);
        assert!(z <= 3.0, "draw {i}: nu {nu} r {r_n} z {z}");
    }
    assert!(worst > 0.0);
}

#[test]
fn standard_error_shrinks_as_root_n() {
    let p = RadioParams::default();
    let stream = StreamSeed::new(15, tags::INTERFERENCE);
    let trials = [100u64, 1_000, 10_000];
    let points: Vec<(f64, f64)> = trials
        .iter()
        .map(|&t| {
            let se = mc_interference(2.0, 1e-3, &p, t, &stream).unwrap().std_error;
            ((t as f64).ln(), se.ln())
        })
        .collect();
    let mx = points.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = points.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() <= 0.05, "slope {slope}");
}

#[test]
fn default_radius_is_a_range_fixed_point() {
    let src = SourceModel::default();
    for nu in [2.5, 3.0, 3.5] {
        for lambda in [0.045, 0.09, 0.18, 0.36] {
            let p = RadioParams::default().with_pathloss(nu);
            let (r_n, _) = max_cluster_radius(lambda, src.entropy(), &p, RadiusMode::FixedPoint).unwrap();
            let interference = field_interference(lambda, r_n, p.q_max_m2m_w, &p).unwrap();
            let q = m2m_power(src.entropy(), channel_gain(r_n, &p).unwrap(), interference, &p).unwrap();
            assert!((q / p.q_max_m2m_w - 1.0).abs() < 1e-8, "nu {nu} lambda {lambda}: {q}");
        }
    }
}

#[test]
fn converged_state_has_equal_fitness_among_survivors() {
    let p = RadioParams::default();
    for c in [0.5, 6.0, 30.0] {
        let src = SourceModel::default().with_corr_constant(c);
        let set = StrategySet::for_scenario(0.09, &p, &src, RadiusMode::FixedPoint).unwrap();
        let cfg = ReplicatorConfig::default();
        let (report, _) = run_to_ess(&set, &p, &src, &cfg).unwrap();
        assert!(report.converged);
        let u = report.mean_fitness_normalized;
        for (x, f) in report.x_star.iter().zip(&report.fitness_normalized) {
            if *x > cfg.tol {
                assert!((f - u).abs() <= 10.0 * cfg.tol * u.abs());
            }
        }
    }
}
