// Stable clustering against the all-largest, uniform and no-clustering
// baselines.

use evoclust::config::ScenarioConfig;
use evoclust::experiment::run_scenario;

pub fn run_example() -> evoclust::Result<()> {
    let outcome = run_scenario(&ScenarioConfig::default())?;
    println!("{} (N = {})", outcome.id, outcome.strategy.n_max());
    for row in &outcome.rows {
        println!(
            "{:>9}: {:.4e} W per device, {:.4e} W per cluster, {:.3} redundant bits",
            row.strategy, row.avg_power_per_mtd_w, row.total_power_per_cluster_w, row.redundant_bits
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> evoclust::Result<()> {
    run_example()
}
