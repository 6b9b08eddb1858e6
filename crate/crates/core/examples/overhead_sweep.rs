//! Speedup and τ_rate as the per-shot overhead grows, with and without T1
//! decay. Without decay C = SNR²/8 exactly; SNR² is convex in τ, so the
//! certification time keeps falling and τ_rate runs to the window edge.
//!
//!     cargo run --release --example overhead_sweep

use readout_chernoff::throughput::stationarity_residual;
use readout_chernoff::{speedup, CertificationSpec, Numerics, PhysicalParams};

fn main() -> readout_chernoff::Result<()> {
    let numerics = Numerics::default();
    for (label, p) in [
        ("T1 = 30 us", PhysicalParams::baseline()),
        ("T1 = inf", PhysicalParams::baseline().with_t1(f64::INFINITY)),
    ] {
        println!("{label}");
        println!(
            "{:>10} {:>10} {:>10} {:>9} {:>12}",
            "tau_oh", "tau_fid", "tau_rate", "speedup", "residual"
        );
        for oh_us in [5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
            let spec = CertificationSpec::default().with_tau_oh(oh_us * 1e-6);
            let r = speedup(&p, &spec, &numerics)?;
            let residual = stationarity_residual(r.tau_rate, &p, &spec)?;
            println!(
                "{oh_us:>10.1} {:>10.4} {:>10.4}{} {:>8.4} {:>12.4e}",
                r.tau_fid * 1e6,
                r.tau_rate * 1e6,
                if r.rate_at_boundary { "*" } else { " " },
                r.speedup,
                residual
            );
        }
        println!();
    }
    println!("* tau_rate on the window edge; residual is the Gaussian-limit stationarity residual");
    Ok(())
}
