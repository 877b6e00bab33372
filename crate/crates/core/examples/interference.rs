// Mean inter-cluster interference: closed form against a truncated Poisson
// field simulation with an analytic tail.

use evoclust::geometry::{mc_interference, mean_interference};
use evoclust::radio::RadioParams;
use evoclust::rng::{tags, StreamSeed};

pub fn run_example() -> evoclust::Result<()> {
    let stream = StreamSeed::new(42, tags::INTERFERENCE);
    for nu in [2.5, 3.0] {
        let p = RadioParams::default().with_pathloss(nu);
        for (i, r_n) in [2.0, 4.0, 8.0].into_iter().enumerate() {
            let analytic = mean_interference(r_n, p.q_max_m2m_w, &p)?;
            let mc = mc_interference(r_n, p.q_max_m2m_w, &p, 2_000, &stream.child(i as u64))?;
            println!(
                "nu {nu}, r_n {r_n:>3} m: closed form {analytic:.4e} W, simulated {:.4e} +- {:.1e} W (tail {:.1e})",
                mc.mean, mc.std_error, mc.tail_correction
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> evoclust::Result<()> {
    run_example()
}
