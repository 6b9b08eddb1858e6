//! Chernoff information, Bayes fidelity and information efficiency along τ.
//! Decay makes the excited distribution asymmetric, which pulls the optimal
//! Chernoff parameter s* below 1/2 and the efficiency below η.
//!
//!     cargo run --release --example chernoff_vs_fidelity

use readout_chernoff::quadrature::log_space;
use readout_chernoff::{Numerics, PhysicalParams, ReadoutPoint};

fn main() -> readout_chernoff::Result<()> {
    let numerics = Numerics::default();
    for (label, p) in [
        ("T1 = 30 us", PhysicalParams::baseline()),
        ("T1 = inf", PhysicalParams::baseline().with_t1(f64::INFINITY)),
    ] {
        println!("{label}");
        println!(
            "{:>8} {:>10} {:>10} {:>8} {:>10}",
            "tau(us)", "C", "F", "s*", "eta_info"
        );
        for tau in log_space(0.05e-6, 3e-6, 12) {
            let pt = ReadoutPoint::evaluate(tau, &p, &numerics)?;
            println!(
                "{:>8.3} {:>10.4} {:>10.6} {:>8.4} {:>10.4}",
                tau * 1e6,
                pt.chernoff.c,
                pt.fidelity.value,
                pt.chernoff.s_star,
                pt.eta_info()
            );
        }
        println!();
    }
    Ok(())
}
