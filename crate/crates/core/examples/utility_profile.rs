// Utility of every cluster type in the base scenario, split into its M2M and
// cellular parts and checked against direct integration.

use evoclust::game::{utility_closed_form, utility_terms, StrategySet};
use evoclust::geometry::RadiusMode;
use evoclust::radio::{RadioParams, SourceModel};
use evoclust::validation::utility_quadrature;

pub fn run_example() -> evoclust::Result<()> {
    let p = RadioParams::default();
    let src = SourceModel::default();
    let set = StrategySet::for_scenario(0.09, &p, &src, RadiusMode::FixedPoint)?;
    println!("r_N = {:.3} m, N = {}", set.r_max_m(), set.n_max());
    for j in 1..=set.n_max() {
        let terms = utility_terms(j, &set, &p, &src)?;
        let u = utility_closed_form(j, &set, &p, &src)?;
        let quad = utility_quadrature(j, &set, &p, &src)?;
        println!(
            "type {j}: r = {:.3} m, M2M {:.4e} W, cellular {:.4e} W, u = {u:.6e} W (quadrature {quad:.6e})",
            set.radius(j)?,
            terms.m2m_w,
            terms.cellular_w
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> evoclust::Result<()> {
    run_example()
}
