// A small density sweep written to disk, then read back.

use evoclust::config::ScenarioConfig;
use evoclust::experiment::{cli_sweep, read_metrics_csv};

pub fn run_example() -> evoclust::Result<()> {
    let cfg = ScenarioConfig::parse(
        "sweep.lambda_m = 0.045, 0.36\nsweep.corr_constant_c = 0.5, 30\n",
        "inline",
    )?;
    let out = std::env::temp_dir().join(format!("evoclust-sweep-example-{}", std::process::id()));
    let summary = cli_sweep(&cfg, &out, true)?;
    for line in &summary.lines {
        println!("{line}");
    }
    let bytes = std::fs::read(out.join("sweep.csv")).map_err(|e| evoclust::Error::Domain(e.to_string()))?;
    for row in read_metrics_csv(&bytes)? {
        println!(
            "{} {:>9}: {:.4e} W, {:.3} bits",
            row.scenario_id, row.strategy, row.total_power_per_cluster_w, row.redundant_bits
        );
    }
    let _ = std::fs::remove_dir_all(&out);
    Ok(())
}

#[allow(dead_code)]
fn main() -> evoclust::Result<()> {
    run_example()
}
