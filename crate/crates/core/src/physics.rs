//! Cavity response, matched-filter SNR and post-decay trajectories.
//!
//! Everything here is a closed-form or fixed-order quadrature expression in SI
//! units: frequencies are angular (rad/s), times are seconds.

use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Result};
use crate::quadrature::GaussLegendre;

/// Device constants of a dispersively read-out qubit.
///
/// `chi` and `kappa` are angular rates in rad/s. `t1` may be `f64::INFINITY`,
/// which selects the decay-free Gaussian limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub chi: f64,
    pub kappa: f64,
    pub n_bar: f64,
    pub eta: f64,
    pub t1: f64,
}

impl PhysicalParams {
    pub fn new(chi: f64, kappa: f64, n_bar: f64, eta: f64, t1: f64) -> Result<Self> {
        let p = Self {
            chi,
            kappa,
            n_bar,
            eta,
            t1,
        };
        p.validate()?;
        Ok(p)
    }

    /// Representative transmon readout: χ = 1.2×10⁶ rad/s, κ = 5×10⁶ rad/s,
    /// n̄ = 80, η = 0.45, T1 = 30 µs.
    pub fn baseline() -> Self {
        Self {
            chi: 1.2e6,
            kappa: 5.0e6,
            n_bar: 80.0,
            eta: 0.45,
            t1: 30e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.chi.is_finite() && self.chi > 0.0) {
            return Err(config("chi", format!("must be finite and > 0, got {}", self.chi)));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(config(
                "kappa",
                format!("must be finite and > 0, got {}", self.kappa),
            ));
        }
        if !(self.n_bar.is_finite() && self.n_bar >= 0.0) {
            return Err(config(
                "n_bar",
                format!("must be finite and >= 0, got {}", self.n_bar),
            ));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(config("eta", format!("must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.t1 > 0.0) {
            return Err(config("t1", format!("must be > 0 or infinite, got {}", self.t1)));
        }
        Ok(())
    }

    pub fn with_eta(self, eta: f64) -> Self {
        Self { eta, ..self }
    }

    pub fn with_t1(self, t1: f64) -> Self {
        Self { t1, ..self }
    }

    pub fn with_n_bar(self, n_bar: f64) -> Self {
        Self { n_bar, ..self }
    }

    /// True when `t1` is infinite (no relaxation during readout).
    pub fn is_gaussian_limit(&self) -> bool {
        self.t1.is_infinite()
    }

    /// Steady-state separation 4χ/κ.
    pub fn separation_ceiling(&self) -> f64 {
        4.0 * self.chi / self.kappa
    }

    /// Asymptotic growth rate of SNR², η κ n̄ (4χ/κ)², in 1/s.
    pub fn snr_squared_slope(&self) -> f64 {
        let a = self.separation_ceiling();
        self.eta * self.kappa * self.n_bar * a * a
    }

    /// Cavity state separation Δα(t) = (4χ/κ)(1 − e^{−κt/2}).
    pub fn delta_alpha(&self, t: f64) -> Result<f64> {
        check_time("t", t)?;
        Ok(self.delta_alpha_unchecked(t))
    }

    pub(crate) fn delta_alpha_unchecked(&self, t: f64) -> f64 {
        self.separation_ceiling() * ring_up(self.kappa, t)
    }

    /// Matched-filter SNR² accumulated up to `tau`, η κ n̄ ∫₀^τ Δα(t)² dt.
    pub fn snr_squared(&self, tau: f64) -> Result<f64> {
        check_time("tau", tau)?;
        Ok(self.snr_squared_unchecked(tau))
    }

    pub(crate) fn snr_squared_unchecked(&self, tau: f64) -> f64 {
        let a = self.separation_ceiling();
        self.eta * self.n_bar * a * a * ring_up_integral(self.kappa * tau)
    }

    /// d SNR²/dτ = η κ n̄ Δα(τ)².
    pub fn snr_squared_derivative(&self, tau: f64) -> Result<f64> {
        check_time("tau", tau)?;
        let d = self.delta_alpha_unchecked(tau);
        Ok(self.eta * self.kappa * self.n_bar * d * d)
    }

    /// Cavity displacement along the measured quadrature for an excited qubit
    /// that relaxes at `t_j`: `+Δα(t)` before the jump, then an exponential
    /// approach (rate κ/2) to the driven ground trajectory `−Δα(t)`.
    pub fn decayed_trajectory(&self, t: f64, t_j: f64) -> Result<f64> {
        check_time("t", t)?;
        check_time("t_j", t_j)?;
        Ok(self.decayed_trajectory_unchecked(t, t_j))
    }

    fn decayed_trajectory_unchecked(&self, t: f64, t_j: f64) -> f64 {
        if t < t_j {
            self.delta_alpha_unchecked(t)
        } else {
            -self.delta_alpha_unchecked(t)
                + 2.0 * self.delta_alpha_unchecked(t_j) * (-0.5 * self.kappa * (t - t_j)).exp()
        }
    }

    /// Matched-filter projection of a trajectory that decays at `t_j`,
    /// normalized by the projection of the undecayed one:
    ///
    /// r(t_j) = ∫₀^τ h(t) α(t; t_j) dt / ∫₀^τ h(t)² dt, with h = Δα.
    ///
    /// r(0) = −1 and r(τ) = +1 hold exactly. Both integrals are split at the
    /// kink `t_j` and evaluated with order-64 Gauss–Legendre on each piece.
    pub fn overlap_ratio(&self, t_j: f64, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(domain("tau", tau));
        }
        if !(0.0..=tau).contains(&t_j) {
            return Err(domain("t_j", t_j));
        }
        Ok(self.overlap_ratio_unchecked(t_j, tau))
    }

    pub(crate) fn overlap_ratio_unchecked(&self, t_j: f64, tau: f64) -> f64 {
        let rule = GaussLegendre::order_64();
        let k = self.kappa;
        // The 4χ/κ prefactor cancels between numerator and denominator.
        let before: f64 = rule.integrate(0.0, t_j, |t| ring_up(k, t).powi(2));
        let (after, memory) = if t_j < tau {
            rule.mapped(t_j, tau).fold((0.0, 0.0), |(sq, mem), (t, w)| {
                let h = ring_up(k, t);
                (sq + w * h * h, mem + w * h * (-0.5 * k * (t - t_j)).exp())
            })
        } else {
            (0.0, 0.0)
        };
        let norm = before + after;
        (before - after + 2.0 * ring_up(k, t_j) * memory) / norm
    }
}

fn check_time(what: &'static str, t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(domain(what, t))
    }
}

/// 1 − e^{−κt/2}
fn ring_up(kappa: f64, t: f64) -> f64 {
    -(-0.5 * kappa * t).exp_m1()
}

/// κ ∫₀^τ (1 − e^{−κt/2})² dt as a function of x = κτ:
/// x − 4(1 − e^{−x/2}) + (1 − e^{−x}).
fn ring_up_integral(x: f64) -> f64 {
    if x < 1e-4 {
        // Leading terms of the expansion; the closed form cancels catastrophically here.
        x * x * x * (1.0 / 12.0 - x / 32.0 + 7.0 * x * x / 960.0)
    } else {
        x + 4.0 * (-0.5 * x).exp_m1() - (-x).exp_m1()
    }
}
