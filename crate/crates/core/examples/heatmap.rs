//! Speedup heatmap over photon number and overhead at T1 = 20 µs, η = 0.5,
//! printed as a table. Pass `n` to change the resolution (default 5).
//!
//!     cargo run --release --example heatmap [n]

use readout_chernoff::sweeps::{run_sweep, Spacing, SweepAxis, SweepParam};
use readout_chernoff::{CertificationSpec, Numerics, PhysicalParams};

fn main() -> readout_chernoff::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let params = PhysicalParams::baseline().with_t1(20e-6).with_eta(0.5);
    let n_bar = SweepAxis::grid(SweepParam::NBar, 40.0, 120.0, n, Spacing::Linear);
    let tau_oh = SweepAxis::grid(SweepParam::TauOh, 5e-6, 30e-6, n, Spacing::Linear);
    let result = run_sweep(
        &params,
        &CertificationSpec::default(),
        &Numerics::default(),
        &n_bar,
        &tau_oh,
    )?;

    print!("{:>8} |", "n_bar");
    for oh in tau_oh.values() {
        print!(" {:>7.1}", oh * 1e6);
    }
    println!("   <- tau_oh (us)");
    for (i, nb) in n_bar.values().iter().enumerate() {
        print!("{nb:>8.1} |");
        for j in 0..tau_oh.len() {
            let mark = if result.flag(i, j).is_clean() { ' ' } else { '!' };
            print!(" {:>6.4}{mark}", result.value(i, j));
        }
        println!();
    }
    if let Some(((i, j), best)) = result.argmax() {
        println!(
            "\nmax speedup {best:.4} at n_bar = {}, tau_oh = {} us",
            n_bar.values()[i],
            tau_oh.values()[j] * 1e6
        );
    }
    Ok(())
}
