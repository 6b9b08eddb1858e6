//! Cavity ring-up, accumulated SNR² and the decayed-trajectory overlap ratio
//! at the baseline parameters.
//!
//!     cargo run --release --example cavity_response

use readout_chernoff::PhysicalParams;

fn main() -> readout_chernoff::Result<()> {
    let p = PhysicalParams::baseline();
    println!(
        "chi = {:.3e} rad/s, kappa = {:.3e} rad/s, ceiling 4chi/kappa = {:.3}",
        p.chi,
        p.kappa,
        p.separation_ceiling()
    );

    println!(
        "\n{:>8} {:>12} {:>12} {:>14}",
        "t (us)", "delta_alpha", "SNR^2", "dSNR^2/dtau"
    );
    for t_us in [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0] {
        let t = t_us * 1e-6;
        println!(
            "{t_us:>8.2} {:>12.5} {:>12.4} {:>14.4e}",
            p.delta_alpha(t)?,
            p.snr_squared(t)?,
            p.snr_squared_derivative(t)?
        );
    }

    // How much of the undecayed matched-filter signal survives a jump at t_j.
    let tau = 1.2e-6;
    println!("\noverlap ratio r(t_j) for tau = 1.2 us");
    for frac in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let tj = frac * tau;
        println!(
            "  t_j = {:.3} us  r = {:+.5}",
            tj * 1e6,
            p.overlap_ratio(tj, tau)?
        );
    }
    Ok(())
}
