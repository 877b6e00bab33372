// Replicator dynamics to the stable population state, with the deviation
// bound and the sign certificate.

use evoclust::game::{run_to_ess, solve_ess, ReplicatorConfig, StepRule, StrategySet, UtilityVector};
use evoclust::geometry::RadiusMode;
use evoclust::radio::{RadioParams, SourceModel};

pub fn run_example() -> evoclust::Result<()> {
    let toy = UtilityVector::new(vec![-1.0, -2.0, -3.0])?;
    let cfg = ReplicatorConfig {
        log_every: 10,
        ..Default::default()
    };
    let (report, trace) = solve_ess(&toy, &cfg)?;
    println!(
        "toy game: x* = {:?} after {} iterations ({} trace rows), eps* = {:.4}",
        report.x_star.as_slice(),
        report.iterations,
        trace.records.len(),
        report.epsilon_star
    );

    let p = RadioParams::default();
    let src = SourceModel::default();
    let set = StrategySet::for_scenario(0.09, &p, &src, RadiusMode::FixedPoint)?;
    for rule in [StepRule::FitnessScaled, StepRule::Constant] {
        let cfg = ReplicatorConfig {
            step_rule: rule,
            step_eta: if rule == StepRule::Constant { 1.0 } else { 0.5 },
            tol: 1e-6,
            ..Default::default()
        };
        let (report, trace) = run_to_ess(&set, &p, &src, &cfg)?;
        let last = trace.records.last().expect("trace holds the final state");
        println!(
            "{rule}: converged {} in {} iterations, x_1 = {:.6}, power per device {:.4e} W, stable {}",
            report.converged, report.iterations, report.x_star[0], last.avg_power_w, report.jacobian.stable
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> evoclust::Result<()> {
    run_example()
}
