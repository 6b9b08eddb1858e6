//! Wall-clock certification objective and the two competing choices of
//! integration window: the one that maximizes single-shot Bayes fidelity and
//! the one that minimizes total certification time.

use std::cell::RefCell;
use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Error, Result};
use crate::metrics::ReadoutPoint;
use crate::numerics::Numerics;
use crate::physics::PhysicalParams;
use crate::quadrature::{golden_section_min, log_space};

/// Target error, per-shot overhead and τ search window. Times in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationSpec {
    pub tau_oh: f64,
    pub epsilon: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_scan_points: usize,
}

impl Default for CertificationSpec {
    fn default() -> Self {
        Self {
            tau_oh: 15e-6,
            epsilon: 1e-4,
            tau_min: 0.05e-6,
            tau_max: 5e-6,
            tau_scan_points: 120,
        }
    }
}

impl CertificationSpec {
    pub fn with_tau_oh(self, tau_oh: f64) -> Self {
        Self { tau_oh, ..self }
    }

    /// `tau_min == tau_max` is accepted and pins both optima to that value.
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_oh >= 0.0 && self.tau_oh.is_finite()) {
            return Err(config("tau_oh", "must be finite and >= 0"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(config(
                "epsilon",
                format!("must lie in (0, 1), got {}", self.epsilon),
            ));
        }
        if !(self.tau_min > 0.0 && self.tau_min.is_finite()) {
            return Err(config("tau_min", "must be finite and > 0"));
        }
        if !(self.tau_max >= self.tau_min && self.tau_max.is_finite()) {
            return Err(config("tau_max", "must be finite and >= tau_min"));
        }
        if self.tau_max > self.tau_min && self.tau_scan_points < 50 {
            return Err(config("tau_scan_points", "must be >= 50"));
        }
        Ok(())
    }

    /// Log-spaced scan grid over the window.
    pub fn scan_grid(&self) -> Vec<f64> {
        if self.tau_max == self.tau_min {
            vec![self.tau_min]
        } else {
            log_space(self.tau_min, self.tau_max, self.tau_scan_points)
        }
    }

    /// log(1/ε)
    pub fn log_inverse_epsilon(&self) -> f64 {
        -self.epsilon.ln()
    }
}

/// T_cert = log(1/ε)/C · (τ + τ_oh). Zero or negative `c` yields
/// [`Error::InfiniteTime`].
pub fn certification_time(tau: f64, c: f64, spec: &CertificationSpec) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::InfiniteTime { c });
    }
    Ok(spec.log_inverse_epsilon() / c * (tau + spec.tau_oh))
}

/// C(τ) and F(τ) tabulated once on the scan grid and shared by both optimizers.
#[derive(Debug, Clone)]
pub struct ReadoutCurve {
    pub params: PhysicalParams,
    pub spec: CertificationSpec,
    pub numerics: Numerics,
    pub points: Vec<ReadoutPoint>,
}

impl ReadoutCurve {
    /// Evaluates the scan grid in parallel; output order follows the grid.
    pub fn build(params: &PhysicalParams, spec: &CertificationSpec, numerics: &Numerics) -> Result<Self> {
        params.validate()?;
        spec.validate()?;
        numerics.validate()?;
        let points = spec
            .scan_grid()
            .into_par_iter()
            .map(|tau| ReadoutPoint::evaluate(tau, params, numerics))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: *params,
            spec: *spec,
            numerics: *numerics,
            points,
        })
    }

    pub fn taus(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.tau).collect()
    }

    pub fn certification_times(&self) -> Result<Vec<f64>> {
        self.points
            .iter()
            .map(|p| certification_time(p.tau, p.chernoff.c, &self.spec))
            .collect()
    }

    fn evaluate(&self, tau: f64) -> Result<ReadoutPoint> {
        ReadoutPoint::evaluate(tau, &self.params, &self.numerics)
    }
}

/// Location of an optimum in τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauOptimum {
    pub tau: f64,
    pub value: f64,
    /// The best scan point sat on the edge of the window.
    pub at_boundary: bool,
}

/// Fidelity-optimal window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityOptimum {
    pub tau: f64,
    pub fidelity: f64,
    pub at_boundary: bool,
    /// F was flat to within 1e-12 of its maximum over several scan points;
    /// the smallest such τ is returned.
    pub saturated: bool,
}

/// Golden-section search with fallible objective evaluations.
fn refine(f: &mut dyn FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let failure = RefCell::new(None);
    let found = golden_section_min(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        tol,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok((found.x, found.value)),
    }
}

/// Global minimum of `f` over a scanned window: every local minimum of the
/// scan is refined on its neighbouring bracket and the best result wins,
/// ties going to the smaller τ. Never worse than the best scan value.
pub fn scan_refine_min(
    taus: &[f64],
    values: &[f64],
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<TauOptimum> {
    assert_eq!(taus.len(), values.len());
    let n = taus.len();
    if n == 0 {
        return Err(Error::Contract("empty τ scan".into()));
    }
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] < values[i - 1];
            let right = i == n - 1 || values[i] <= values[i + 1];
            left && right
        })
        .collect();
    let mut best: Option<(f64, f64, usize)> = None;
    let mut consider = |tau: f64, value: f64, idx: usize| {
        let better = match best {
            None => true,
            Some((bt, bv, _)) => match value.total_cmp(&bv) {
                Ordering::Less => true,
                Ordering::Equal => tau < bt,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((tau, value, idx));
        }
    };
    for &i in &candidates {
        consider(taus[i], values[i], i);
        if n > 1 {
            let lo = taus[i.saturating_sub(1)];
            let hi = taus[(i + 1).min(n - 1)];
            let (tau, value) = refine(&mut f, lo, hi, tol)?;
            consider(tau, value, i);
        }
    }
    // The scan-grid global minimum is always a candidate, so `best` is set.
    let (tau, value, idx) = best.expect("at least one local minimum");
    Ok(TauOptimum {
        tau,
        value,
        at_boundary: n > 1 && (idx == 0 || idx == n - 1),
    })
}

/// τ_fid: maximizes Bayes fidelity over the curve's window.
pub fn optimize_tau_fid(curve: &ReadoutCurve) -> Result<FidelityOptimum> {
    let taus = curve.taus();
    let fids: Vec<f64> = curve.points.iter().map(|p| p.fidelity.value).collect();
    let n = taus.len();
    let f_max = fids.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let plateau: Vec<usize> = (0..n).filter(|&i| fids[i] >= f_max - 1e-12).collect();
    if plateau.len() > 1 {
        let i = plateau[0];
        return Ok(FidelityOptimum {
            tau: taus[i],
            fidelity: fids[i],
            at_boundary: i == 0 || i == n - 1,
            saturated: true,
        });
    }
    let negated: Vec<f64> = fids.iter().map(|f| -f).collect();
    let best = (0..n)
        .min_by(|&a, &b| negated[a].total_cmp(&negated[b]))
        .expect("non-empty curve");
    let (tau, neg) = if n > 1 {
        let lo = taus[best.saturating_sub(1)];
        let hi = taus[(best + 1).min(n - 1)];
        let (tau, neg) = refine(
            &mut |t| Ok(-curve.evaluate(t)?.fidelity.value),
            lo,
            hi,
            curve.numerics.tau_tol,
        )?;
        if neg < negated[best] {
            (tau, neg)
        } else {
            (taus[best], negated[best])
        }
    } else {
        (taus[best], negated[best])
    };
    Ok(FidelityOptimum {
        tau,
        fidelity: -neg,
        at_boundary: n > 1 && (best == 0 || best == n - 1),
        saturated: curve.points[best].fidelity.saturated,
    })
}

/// τ_rate: minimizes certification time over the curve's window.
pub fn optimize_tau_rate(curve: &ReadoutCurve) -> Result<TauOptimum> {
    let taus = curve.taus();
    let times = curve.certification_times()?;
    scan_refine_min(&taus, &times, curve.numerics.tau_tol, |t| {
        certification_time(t, curve.evaluate(t)?.chernoff.c, &curve.spec)
    })
}

/// Both optima, the certification times they imply and diagnostics at τ_rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub tau_fid: f64,
    pub tau_rate: f64,
    pub fidelity_at_fid: f64,
    pub t_cert_at_fid: f64,
    pub t_cert_at_rate: f64,
    pub speedup: f64,
    pub chernoff_at_rate: f64,
    pub s_star_at_rate: f64,
    pub eta_info_at_rate: f64,
    pub fidelity_saturated: bool,
    pub fid_at_boundary: bool,
    pub rate_at_boundary: bool,
}

impl OptimumReport {
    pub fn from_curve(curve: &ReadoutCurve) -> Result<Self> {
        let fid = optimize_tau_fid(curve)?;
        let rate = optimize_tau_rate(curve)?;
        let at_fid = curve.evaluate(fid.tau)?;
        let at_rate = curve.evaluate(rate.tau)?;
        let t_cert_at_fid = certification_time(fid.tau, at_fid.chernoff.c, &curve.spec)?;
        let t_cert_at_rate = certification_time(rate.tau, at_rate.chernoff.c, &curve.spec)?;
        Ok(Self {
            tau_fid: fid.tau,
            tau_rate: rate.tau,
            fidelity_at_fid: at_fid.fidelity.value,
            t_cert_at_fid,
            t_cert_at_rate,
            speedup: t_cert_at_fid / t_cert_at_rate,
            chernoff_at_rate: at_rate.chernoff.c,
            s_star_at_rate: at_rate.chernoff.s_star,
            eta_info_at_rate: at_rate.eta_info(),
            fidelity_saturated: fid.saturated,
            fid_at_boundary: fid.at_boundary,
            rate_at_boundary: rate.at_boundary,
        })
    }
}

/// Speedup T_cert(τ_fid) / T_cert(τ_rate) together with both optima.
pub fn speedup(
    params: &PhysicalParams,
    spec: &CertificationSpec,
    numerics: &Numerics,
) -> Result<OptimumReport> {
    OptimumReport::from_curve(&ReadoutCurve::build(params, spec, numerics)?)
}

/// Relative violation of the Gaussian-limit stationarity condition
/// SNR²(τ) = (τ + τ_oh) dSNR²/dτ:
///
/// [SNR²(τ) − (τ + τ_oh) dSNR²/dτ] / SNR²(τ).
pub fn stationarity_residual(tau: f64, params: &PhysicalParams, spec: &CertificationSpec) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(domain("tau", tau));
    }
    let snr2 = params.snr_squared(tau)?;
    let slope = params.snr_squared_derivative(tau)?;
    Ok((snr2 - (tau + spec.tau_oh) * slope) / snr2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
}

/// Outcome of evaluating the linear-SNR² surrogate objective on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateReport {
    /// Sign of b − a·τ_oh.
    pub predicted: Trend,
    /// Every consecutive difference had the predicted sign.
    pub consistent: bool,
    pub values: Vec<f64>,
}

/// Evaluates (τ + τ_oh)/(aτ + b) on `tau_grid` and checks that its discrete
/// derivative carries the sign of b − a·τ_oh everywhere.
pub fn linear_surrogate_check(
    a: f64,
    b: f64,
    spec: &CertificationSpec,
    tau_grid: &[f64],
) -> Result<SurrogateReport> {
    if !(a > 0.0) {
        return Err(domain("a", a));
    }
    if !(b >= 0.0) {
        return Err(domain("b", b));
    }
    let scale = b.max(a * spec.tau_oh);
    let gap = b - a * spec.tau_oh;
    let predicted = if gap.abs() <= 1e-12 * scale {
        Trend::Constant
    } else if gap > 0.0 {
        Trend::Increasing
    } else {
        Trend::Decreasing
    };
    let values: Vec<f64> = tau_grid
        .iter()
        .map(|&t| (t + spec.tau_oh) / (a * t + b))
        .collect();
    let consistent = values.windows(2).all(|w| {
        let d = w[1] - w[0];
        let zero = 1e-12 * w[0].abs().max(w[1].abs());
        match predicted {
            Trend::Constant => d.abs() <= zero,
            Trend::Increasing => d > zero,
            Trend::Decreasing => d < -zero,
        }
    });
    Ok(SurrogateReport {
        predicted,
        consistent,
        values,
    })
}
