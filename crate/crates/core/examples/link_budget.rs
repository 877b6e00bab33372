// Link budgets of one cluster: entropy bookkeeping, cellular and
// device-to-device powers, and the range of an M2M link.

use evoclust::radio::{
    cellular_link, channel_gain, joint_entropy, max_m2m_distance, m2m_power, redundant_bits, watts_to_dbm,
    RadioParams, SourceModel,
};

pub fn run_example() -> evoclust::Result<()> {
    let p = RadioParams::default();
    let src = SourceModel::default();
    let h = src.entropy();
    println!("per-device entropy: {h:.4} bits");

    for n in [1, 2, 5, 10] {
        let joint = joint_entropy(h, n, 4.0, src.corr_constant_c)?;
        let saved = redundant_bits(h, n, 4.0, src.corr_constant_c)?;
        println!("cluster of {n:>2} within 4 m: {joint:8.3} bits to relay, {saved:7.3} redundant");
    }

    let uplink = cellular_link(h, &p)?;
    println!(
        "cellular uplink at {} m: gain {:.4e}, power {:.4e} W ({:.2} dBm)",
        p.bs_distance_m,
        uplink.gain,
        uplink.power_w,
        watts_to_dbm(uplink.power_w)?
    );

    let interference = 1e-6;
    let range = max_m2m_distance(&p, h, interference)?;
    let at_range = m2m_power(h, channel_gain(range, &p)?, interference, &p)?;
    println!("M2M range under {interference:e} W interference: {range:.3} m (power there {at_range:.4} W)");
    Ok(())
}

#[allow(dead_code)]
fn main() -> evoclust::Result<()> {
    run_example()
}
