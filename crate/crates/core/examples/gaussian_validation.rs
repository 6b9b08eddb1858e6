//! Gaussian-limit check of the numerical pipeline against C = SNR²/8 and the
//! full self-consistency report.
//!
//!     cargo run --release --example gaussian_validation

use readout_chernoff::quadrature::log_space;
use readout_chernoff::sweeps::gaussian_validation;
use readout_chernoff::validate::run_checks;
use readout_chernoff::{Numerics, PhysicalParams};

fn main() -> readout_chernoff::Result<()> {
    let p = PhysicalParams::baseline().with_t1(f64::INFINITY);
    let numerics = Numerics::default();
    let rows = gaussian_validation(&p, &numerics, &log_space(0.05e-6, 3e-6, 10))?;
    println!(
        "{:>8} {:>12} {:>12} {:>10}",
        "tau(us)", "C_num", "SNR^2/8", "rel.resid"
    );
    for r in &rows {
        println!(
            "{:>8.3} {:>12.6} {:>12.6} {:>10.2e}",
            r.tau * 1e6,
            r.c_num,
            r.c_theory,
            r.relative_residual()
        );
    }

    let report = run_checks(&PhysicalParams::baseline(), &numerics)?;
    println!();
    for c in &report.checks {
        println!(
            "{:<26} {}  worst {:.2e} (tolerance {:.0e})",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.worst,
            c.tolerance
        );
    }
    Ok(())
}
