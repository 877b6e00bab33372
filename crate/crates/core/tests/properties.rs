use evoclust::config::ScenarioConfig;
use evoclust::game::{
    epsilon_star, fitness, jacobian, mean_fitness, pairwise_utility, replicator_field, replicator_step, solve_ess,
    PopulationState, ReplicatorConfig, StepRule, StrategySet, UtilityVector,
};
use evoclust::geometry::{kth_distance_cdf, kth_distance_pdf};
use evoclust::metrics::{expected_metrics, ScenarioRef, StrategyLabel};
use evoclust::radio::{
    cellular_power, channel_gain, dbm_to_watts, joint_entropy, m2m_power, max_m2m_distance, redundant_bits,
    watts_to_dbm, RadioParams, SourceModel,
};
use proptest::prelude::*;

fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("non-zero mass", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-3).then(|| w.iter().map(|v| v / total).collect())
    })
}

fn utilities(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..0.0, n)
}

fn state_and_utilities() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|n| (simplex(n), utilities(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn joint_entropy_bounds_and_redundancy(h in 0.1f64..40.0, n in 1u64..200, r in 0.0f64..100.0, c in 0.01f64..100.0) {
        let joint = joint_entropy(h, n, r, c).unwrap();
        prop_assert!(joint >= h * (1.0 - 1e-12));
        prop_assert!(joint <= n as f64 * h * (1.0 + 1e-12));
        let saved = redundant_bits(h, n, r, c).unwrap();
        prop_assert!((saved - (n as f64 * h - joint)).abs() <= 1e-9 * (1.0 + n as f64 * h));
        prop_assert!(saved >= 0.0);
    }

    #[test]
    fn redundancy_grows_with_correlation(h in 0.1f64..40.0, n in 2u64..50, r in 0.1f64..50.0, c in 0.01f64..50.0) {
        prop_assert!(redundant_bits(h, n, r, c * 1.5).unwrap() > redundant_bits(h, n, r, c).unwrap());
    }

    #[test]
    fn powers_are_monotone(h in 0.0f64..100.0, dh in 0.01f64..10.0, gain in 1e-14f64..1e-6, i in 1e-12f64..1e-3) {
        let p = RadioParams::default();
        prop_assert!(cellular_power(h + dh, gain, &p).unwrap() > cellular_power(h, gain, &p).unwrap());
        prop_assert!(cellular_power(h + dh, gain * 2.0, &p).unwrap() < cellular_power(h + dh, gain, &p).unwrap());
        prop_assert!(m2m_power(h + dh, gain, i, &p).unwrap() > m2m_power(h, gain, i, &p).unwrap());
        prop_assert!(m2m_power(h + dh, gain * 2.0, i, &p).unwrap() < m2m_power(h + dh, gain, i, &p).unwrap());
    }

    #[test]
    fn max_distance_round_trip(h in 0.5f64..60.0, i in 1e-12f64..1e-3, nu in 2.05f64..4.5) {
        let p = RadioParams::default().with_pathloss(nu);
        let d = max_m2m_distance(&p, h, i).unwrap();
        let q = m2m_power(h, channel_gain(d, &p).unwrap(), i, &p).unwrap();
        prop_assert!((q / p.q_max_m2m_w - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn gain_power_law(d in 1e-3f64..1e4, nu in 2.05f64..5.0) {
        let p = RadioParams::default().with_pathloss(nu);
        let ratio = channel_gain(2.0 * d, &p).unwrap() / channel_gain(d, &p).unwrap();
        prop_assert!((ratio / 2f64.powf(-nu) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn dbm_round_trip(dbm in -250.0f64..80.0) {
        let back = watts_to_dbm(dbm_to_watts(dbm)).unwrap();
        prop_assert!((back - dbm).abs() <= 1e-12 * dbm.abs().max(1.0));
        let w = dbm_to_watts(dbm);
        prop_assert!((dbm_to_watts(watts_to_dbm(w).unwrap()) / w - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn order_statistics_are_ordered(n in 3u64..32, k_frac in 0.0f64..1.0, t in 0.0f64..=1.0, r in 0.5f64..20.0) {
        let k = 1 + ((n - 2) as f64 * k_frac) as u64;
        let d = t * r;
        prop_assert!(kth_distance_pdf(k, n, r, d).unwrap() >= 0.0);
        prop_assert!(kth_distance_cdf(k, n, r, d).unwrap() >= kth_distance_cdf(k + 1, n, r, d).unwrap() - 1e-15);
    }

    #[test]
    fn replicator_step_stays_on_simplex((x, u) in state_and_utilities(), eta in 0.001f64..1.0) {
        let state = PopulationState::new(x.clone()).unwrap();
        let field = replicator_field(&x, &u).unwrap();
        prop_assert!(field.x_dot.iter().sum::<f64>().abs() <= 1e-12 * (1.0 + u.iter().map(|v| v.abs()).fold(0.0, f64::max)));
        let (next, _) = replicator_step(&state, &u, eta / 10.0).unwrap();
        prop_assert!(next.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!((next.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(PopulationState::new(next.into_vec()).is_ok());
    }

    #[test]
    fn fitness_structure((x, u) in state_and_utilities()) {
        let fit = fitness(&x, &u).unwrap();
        for (j, f) in fit.iter().enumerate() {
            prop_assert!(*f >= u[j] - 1e-12);
            for m in 0..u.len() {
                prop_assert_eq!(pairwise_utility(j, m, &u), pairwise_utility(m, j, &u));
            }
        }
        let mean = mean_fitness(&x, &fit);
        let lo = fit.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = fit.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(mean >= lo - 1e-12 && mean <= hi + 1e-12);
    }

    #[test]
    fn epsilon_is_a_fraction((x, u) in state_and_utilities()) {
        let fit = fitness(&x, &u).unwrap();
        let e = epsilon_star(&x, &u, &fit).unwrap();
        prop_assert!(e.value > 0.0 && e.value <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jacobian_matches_finite_differences(x in simplex(5), u in prop::collection::vec(0.0f64..1.0, 5), m in 0usize..5) {
        let h = 1e-6;
        let exact = jacobian(&x, &u).unwrap();
        let mut up = x.clone();
        up[m] += h;
        let mut down = x.clone();
        down[m] -= h;
        let f_up = replicator_field(&up, &u).unwrap().x_dot;
        let f_down = replicator_field(&down, &u).unwrap().x_dot;
        for j in 0..5 {
            let fd = (f_up[j] - f_down[j]) / (2.0 * h);
            let scale = exact[j][m].abs().max(1e-3);
            prop_assert!((fd - exact[j][m]).abs() <= 1e-4 * scale, "j {} m {}: {} vs {}", j, m, fd, exact[j][m]);
        }
    }

    #[test]
    fn worst_type_never_grows(u in prop::collection::vec(-10.0f64..-0.01, 2..8), constant in any::<bool>()) {
        let worst = (0..u.len()).min_by(|a, b| u[*a].total_cmp(&u[*b])).unwrap();
        prop_assume!(u.iter().enumerate().all(|(i, v)| i == worst || *v > u[worst] + 1e-9));
        let cfg = ReplicatorConfig {
            step_rule: if constant { StepRule::Constant } else { StepRule::FitnessScaled },
            step_eta: if constant { 1.0 } else { 0.5 },
            max_iters: 300,
            ..Default::default()
        };
        let (_, trace) = solve_ess(&UtilityVector::new(u).unwrap(), &cfg).unwrap();
        for w in trace.records.windows(2) {
            prop_assert!(w[1].x[worst] <= w[0].x[worst]);
        }
    }

    #[test]
    fn metrics_are_linear_in_the_state(x in simplex(4), y in simplex(4), a in 0.0f64..=1.0, lambda in 0.02f64..0.5, c in 0.1f64..40.0) {
        let p = RadioParams::default();
        let src = SourceModel::default().with_corr_constant(c);
        let set = StrategySet::new(4, lambda, 1.0).unwrap();
        let sc = ScenarioRef { id: "p", strategy: &set, radio: &p, source: &src };
        let mix: Vec<f64> = x.iter().zip(&y).map(|(xi, yi)| a * xi + (1.0 - a) * yi).collect();
        let total: f64 = mix.iter().sum();
        let mix = PopulationState::new(mix.iter().map(|v| v / total).collect()).unwrap();
        let rx = expected_metrics(&PopulationState::new(x).unwrap(), StrategyLabel::Uniform, &sc).unwrap();
        let ry = expected_metrics(&PopulationState::new(y).unwrap(), StrategyLabel::Uniform, &sc).unwrap();
        let rm = expected_metrics(&mix, StrategyLabel::Uniform, &sc).unwrap();
        let close = |m: f64, p: f64, q: f64| (m - (a * p + (1.0 - a) * q)).abs() <= 1e-12 * m.abs().max(1e-300) + 1e-15 * m.abs().max(1.0);
        prop_assert!(close(rm.total_power_per_cluster_w, rx.total_power_per_cluster_w, ry.total_power_per_cluster_w));
        prop_assert!(close(rm.avg_power_per_mtd_w, rx.avg_power_per_mtd_w, ry.avg_power_per_mtd_w));
        prop_assert!(close(rm.redundant_bits, rx.redundant_bits, ry.redundant_bits));
    }

    #[test]
    fn redundant_metric_grows_with_c(x in simplex(4), c in 0.1f64..40.0) {
        prop_assume!(x[0] < 0.999);
        let p = RadioParams::default();
        let set = StrategySet::new(4, 0.09, 1.0).unwrap();
        let state = PopulationState::new(x).unwrap();
        let bits = |c: f64| {
            let src = SourceModel::default().with_corr_constant(c);
            let sc = ScenarioRef { id: "p", strategy: &set, radio: &p, source: &src };
            expected_metrics(&state, StrategyLabel::Uniform, &sc).unwrap().redundant_bits
        };
        prop_assert!(bits(c * 2.0) > bits(c));
    }

    #[test]
    fn config_text_round_trips(lambda in 0.001f64..10.0, seed in any::<u64>(), tol in 1e-14f64..1e-3, nus in prop::collection::vec(2.01f64..5.0, 1..4)) {
        let mut cfg = ScenarioConfig { lambda_m: lambda, seed, ..Default::default() };
        cfg.game.tol = tol;
        cfg.sweep.pathloss_nu = nus;
        prop_assert_eq!(ScenarioConfig::parse(&cfg.to_config_string(), "rt").unwrap(), cfg);
    }
}
