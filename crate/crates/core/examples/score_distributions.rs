//! Ground and excited score distributions: the excited state is a mixture of
//! unit Gaussians, one per quadrature node of the decay time, plus the
//! undecayed component.
//!
//!     cargo run --release --example score_distributions

use readout_chernoff::distributions::{build_excited, build_ground, DEFAULT_JUMP_NODES};
use readout_chernoff::PhysicalParams;

fn main() -> readout_chernoff::Result<()> {
    let p = PhysicalParams::baseline();
    for tau_us in [0.3, 1.2, 3.0] {
        let tau = tau_us * 1e-6;
        let ground = build_ground(tau, &p)?;
        let excited = build_excited(tau, &p, DEFAULT_JUMP_NODES)?;
        let snr = p.snr_squared(tau)?.sqrt();
        let survived = excited
            .components()
            .iter()
            .map(|c| c.weight)
            .fold(0.0f64, f64::max);
        println!(
            "tau = {tau_us} us: SNR = {snr:.3}, {} components, largest weight {survived:.4}, total {:.15}",
            excited.components().len(),
            excited.total_weight()
        );

        // Coarse text histogram of both densities.
        let (lo, hi) = (-snr / 2.0 - 4.0, snr / 2.0 + 4.0);
        for k in 0..=16 {
            let x = lo + (hi - lo) * k as f64 / 16.0;
            let (g, e) = (ground.log_pdf(x).exp(), excited.log_pdf(x).exp());
            println!(
                "  x = {x:>7.2}  g {:<20} e {:<20}",
                "#".repeat((g * 40.0).round() as usize),
                "#".repeat((e * 40.0).round() as usize)
            );
        }
    }
    Ok(())
}
