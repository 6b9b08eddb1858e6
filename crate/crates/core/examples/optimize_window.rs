//! Fidelity-optimal versus throughput-optimal integration time at the
//! baseline parameters, and the resulting certification speedup.
//!
//!     cargo run --release --example optimize_window [tau_oh_us]

use readout_chernoff::{speedup, CertificationSpec, Numerics, PhysicalParams};

fn main() -> readout_chernoff::Result<()> {
    let tau_oh_us: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("tau_oh_us must be a number"))
        .unwrap_or(15.0);
    let spec = CertificationSpec::default().with_tau_oh(tau_oh_us * 1e-6);
    let r = speedup(&PhysicalParams::baseline(), &spec, &Numerics::default())?;

    println!(
        "overhead            {tau_oh_us} us, target error {:e}",
        spec.epsilon
    );
    println!(
        "tau_fid             {:.4} us  (F = {:.6})",
        r.tau_fid * 1e6,
        r.fidelity_at_fid
    );
    println!("tau_rate            {:.4} us", r.tau_rate * 1e6);
    println!("T_cert(tau_fid)     {:.3} us", r.t_cert_at_fid * 1e6);
    println!("T_cert(tau_rate)    {:.3} us", r.t_cert_at_rate * 1e6);
    println!("speedup             {:.4}x", r.speedup);
    println!("s*(tau_rate)        {:.4}", r.s_star_at_rate);
    println!("eta_info(tau_rate)  {:.4}", r.eta_info_at_rate);
    if r.fid_at_boundary || r.rate_at_boundary {
        println!("note: an optimum sits on the edge of the tau window");
    }
    Ok(())
}
