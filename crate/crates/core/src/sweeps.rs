//! Two-parameter speedup heatmaps, the Gaussian-limit validation table and
//! per-τ curve exports.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::metrics::ReadoutPoint;
use crate::numerics::Numerics;
use crate::physics::PhysicalParams;
use crate::quadrature::{lin_space, log_space};
use crate::throughput::{certification_time, speedup, CertificationSpec};

/// Parameter that a sweep axis overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Relaxation time, seconds (may be infinite).
    T1,
    Eta,
    NBar,
    /// Per-shot overhead, seconds.
    TauOh,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::T1 => "t1",
            SweepParam::Eta => "eta",
            SweepParam::NBar => "n_bar",
            SweepParam::TauOh => "tau_oh",
        }
    }

    fn apply(self, value: f64, params: &mut PhysicalParams, spec: &mut CertificationSpec) {
        match self {
            SweepParam::T1 => params.t1 = value,
            SweepParam::Eta => params.eta = value,
            SweepParam::NBar => params.n_bar = value,
            SweepParam::TauOh => spec.tau_oh = value,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t1" => Ok(SweepParam::T1),
            "eta" => Ok(SweepParam::Eta),
            "n_bar" => Ok(SweepParam::NBar),
            "tau_oh" => Ok(SweepParam::TauOh),
            other => Err(config(
                "axis",
                format!("unknown sweep parameter `{other}` (expected t1, eta, n_bar or tau_oh)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Points visited along an axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisPoints {
    Grid {
        lo: f64,
        hi: f64,
        n: usize,
        spacing: Spacing,
    },
    /// Explicit values, e.g. to include an infinite T1.
    List(Vec<f64>),
}

/// One heatmap axis, in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub points: AxisPoints,
}

impl SweepAxis {
    pub fn grid(param: SweepParam, lo: f64, hi: f64, n: usize, spacing: Spacing) -> Self {
        Self {
            param,
            points: AxisPoints::Grid { lo, hi, n, spacing },
        }
    }

    pub fn list(param: SweepParam, values: Vec<f64>) -> Self {
        Self {
            param,
            points: AxisPoints::List(values),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let field = format!("axis {}", self.param);
        match &self.points {
            AxisPoints::Grid { lo, hi, n, spacing } => {
                if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(config(field, "needs finite lo < hi"));
                }
                if *n < 2 {
                    return Err(config(field, "needs at least 2 points"));
                }
                if *spacing == Spacing::Log && *lo <= 0.0 {
                    return Err(config(field, "log spacing needs lo > 0"));
                }
            }
            AxisPoints::List(values) => {
                if values.is_empty() {
                    return Err(config(field, "value list is empty"));
                }
                if values.iter().any(|v| v.is_nan()) {
                    return Err(config(field, "value list contains NaN"));
                }
                if self.param != SweepParam::T1 && values.iter().any(|v| v.is_infinite()) {
                    return Err(config(field, "only t1 accepts infinite values"));
                }
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match &self.points {
            AxisPoints::Grid { lo, hi, n, spacing } => match spacing {
                Spacing::Linear => lin_space(*lo, *hi, *n),
                Spacing::Log => log_space(*lo, *hi, *n),
            },
            AxisPoints::List(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match &self.points {
            AxisPoints::Grid { n, .. } => *n,
            AxisPoints::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-cell outcome markers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFlags {
    pub fid_at_boundary: bool,
    pub rate_at_boundary: bool,
    pub fidelity_saturated: bool,
    pub failure: Option<String>,
}

impl CellFlags {
    pub fn is_clean(&self) -> bool {
        *self == CellFlags::default()
    }

    /// `ok`, or the set markers joined with `|`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.fid_at_boundary {
            parts.push("fid_boundary".to_string());
        }
        if self.rate_at_boundary {
            parts.push("rate_boundary".to_string());
        }
        if self.fidelity_saturated {
            parts.push("saturated".to_string());
        }
        if let Some(f) = &self.failure {
            parts.push(format!("failed: {f}"));
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join("|")
        }
    }
}

/// Speedup heatmap, row-major over (axis1, axis2), with everything needed to
/// recompute any cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    pub values: Vec<f64>,
    pub flags: Vec<CellFlags>,
    pub base_params: PhysicalParams,
    pub base_spec: CertificationSpec,
    pub numerics: Numerics,
}

impl SweepResult {
    pub fn shape(&self) -> (usize, usize) {
        (self.axis1.len(), self.axis2.len())
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axis2.len() + j]
    }

    pub fn flag(&self, i: usize, j: usize) -> &CellFlags {
        &self.flags[i * self.axis2.len() + j]
    }

    /// Index and value of the largest finite speedup.
    pub fn argmax(&self) -> Option<((usize, usize), f64)> {
        let n2 = self.axis2.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, &v)| ((k / n2, k % n2), v))
    }
}

/// Computes the speedup on every (axis1, axis2) cell. Cells run in parallel;
/// results are placed by index. A failing cell is recorded with NaN and a
/// failure flag instead of aborting the sweep.
pub fn run_sweep(
    base_params: &PhysicalParams,
    base_spec: &CertificationSpec,
    numerics: &Numerics,
    axis1: &SweepAxis,
    axis2: &SweepAxis,
) -> Result<SweepResult> {
    if axis1.param == axis2.param {
        return Err(config(
            "axis2",
            format!("both axes sweep `{}`; they must differ", axis1.param),
        ));
    }
    axis1.validate()?;
    axis2.validate()?;
    numerics.validate()?;
    let (v1, v2) = (axis1.values(), axis2.values());
    let n2 = v2.len();
    let cells: Vec<(f64, CellFlags)> = (0..v1.len() * n2)
        .into_par_iter()
        .map(|k| {
            let (mut params, mut spec) = (*base_params, *base_spec);
            axis1.param.apply(v1[k / n2], &mut params, &mut spec);
            axis2.param.apply(v2[k % n2], &mut params, &mut spec);
            match speedup(&params, &spec, numerics) {
                Ok(r) => (
                    r.speedup,
                    CellFlags {
                        fid_at_boundary: r.fid_at_boundary,
                        rate_at_boundary: r.rate_at_boundary,
                        fidelity_saturated: r.fidelity_saturated,
                        failure: None,
                    },
                ),
                Err(e) => (
                    f64::NAN,
                    CellFlags {
                        failure: Some(e.to_string()),
                        ..Default::default()
                    },
                ),
            }
        })
        .collect();
    let (values, flags) = cells.into_iter().unzip();
    Ok(SweepResult {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        values,
        flags,
        base_params: *base_params,
        base_spec: *base_spec,
        numerics: *numerics,
    })
}

/// One row of the Gaussian-limit consistency table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub tau: f64,
    pub c_num: f64,
    pub c_theory: f64,
    pub residual: f64,
}

impl ValidationRow {
    pub fn relative_residual(&self) -> f64 {
        self.residual.abs() / self.c_theory
    }
}

/// Numerical Chernoff information against SNR²/8 with T1 = ∞.
pub fn gaussian_validation(
    params: &PhysicalParams,
    numerics: &Numerics,
    tau_grid: &[f64],
) -> Result<Vec<ValidationRow>> {
    if !params.is_gaussian_limit() {
        return Err(Error::Contract("Gaussian validation requires t1 = inf".into()));
    }
    tau_grid
        .par_iter()
        .map(|&tau| {
            let point = ReadoutPoint::evaluate(tau, params, numerics)?;
            let c_theory = point.snr_squared / 8.0;
            Ok(ValidationRow {
                tau,
                c_num: point.chernoff.c,
                c_theory,
                residual: point.chernoff.c - c_theory,
            })
        })
        .collect()
}

/// Plot-ready row of per-τ quantities. Times in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub tau: f64,
    pub delta_alpha: f64,
    pub snr2: f64,
    pub fidelity: f64,
    pub chernoff: f64,
    pub s_star: f64,
    pub eta_info: f64,
    pub t_cert: f64,
    /// Set when this row could not be computed; numeric fields are then NaN
    /// where unavailable.
    pub error: Option<String>,
}

/// Evaluates every τ in `tau_grid`. Failures are recorded on their row.
pub fn export_curves(
    params: &PhysicalParams,
    spec: &CertificationSpec,
    numerics: &Numerics,
    tau_grid: &[f64],
) -> Vec<CurveRow> {
    tau_grid
        .par_iter()
        .map(|&tau| {
            let delta_alpha = params.delta_alpha(tau).unwrap_or(f64::NAN);
            let snr2 = params.snr_squared(tau).unwrap_or(f64::NAN);
            let failed = |e: Error| CurveRow {
                tau,
                delta_alpha,
                snr2,
                fidelity: f64::NAN,
                chernoff: f64::NAN,
                s_star: f64::NAN,
                eta_info: f64::NAN,
                t_cert: f64::NAN,
                error: Some(e.to_string()),
            };
            let point = match ReadoutPoint::evaluate(tau, params, numerics) {
                Ok(p) => p,
                Err(e) => return failed(e),
            };
            let (t_cert, error) = match certification_time(tau, point.chernoff.c, spec) {
                Ok(t) => (t, None),
                Err(e) => (f64::INFINITY, Some(e.to_string())),
            };
            CurveRow {
                tau,
                delta_alpha,
                snr2,
                fidelity: point.fidelity.value,
                chernoff: point.chernoff.c,
                s_star: point.chernoff.s_star,
                eta_info: point.eta_info(),
                t_cert,
                error,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> (PhysicalParams, CertificationSpec, Numerics) {
        let spec = CertificationSpec {
            tau_scan_points: 50,
            ..Default::default()
        };
        let numerics = Numerics {
            jump_nodes: 60,
            x_grid_max_spacing: 0.05,
            ..Default::default()
        };
        (PhysicalParams::baseline(), spec, numerics)
    }

    #[test]
    fn axis_names_round_trip() {
        for p in [
            SweepParam::T1,
            SweepParam::Eta,
            SweepParam::NBar,
            SweepParam::TauOh,
        ] {
            assert_eq!(p.name().parse::<SweepParam>().unwrap(), p);
        }
        assert!("chi".parse::<SweepParam>().is_err());
    }

    #[test]
    fn duplicate_axes_rejected() {
        let (p, s, n) = quick();
        let a = SweepAxis::grid(SweepParam::Eta, 0.3, 0.7, 2, Spacing::Linear);
        assert!(matches!(run_sweep(&p, &s, &n, &a, &a), Err(Error::Config { .. })));
    }

    #[test]
    fn single_cell_equals_direct_call() {
        let (p, s, n) = quick();
        let a1 = SweepAxis::list(SweepParam::Eta, vec![0.45]);
        let a2 = SweepAxis::list(SweepParam::TauOh, vec![15e-6]);
        let sweep = run_sweep(&p, &s, &n, &a1, &a2).unwrap();
        let direct = speedup(&p, &s, &n).unwrap();
        assert_eq!(sweep.shape(), (1, 1));
        assert_eq!(sweep.value(0, 0), direct.speedup);
    }

    #[test]
    fn infinite_t1_axis_value_accepted() {
        let (p, s, n) = quick();
        let a1 = SweepAxis::list(SweepParam::T1, vec![30e-6, f64::INFINITY]);
        let a2 = SweepAxis::list(SweepParam::TauOh, vec![15e-6]);
        let sweep = run_sweep(&p, &s, &n, &a1, &a2).unwrap();
        assert!(sweep.values.iter().all(|v| v.is_finite()));
        let bad = SweepAxis::list(SweepParam::Eta, vec![f64::INFINITY]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn transposed_axes_transpose_values() {
        let (p, s, n) = quick();
        let a1 = SweepAxis::grid(SweepParam::NBar, 60.0, 100.0, 2, Spacing::Linear);
        let a2 = SweepAxis::grid(SweepParam::TauOh, 5e-6, 30e-6, 3, Spacing::Linear);
        let ab = run_sweep(&p, &s, &n, &a1, &a2).unwrap();
        let ba = run_sweep(&p, &s, &n, &a2, &a1).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(ab.value(i, j).to_bits(), ba.value(j, i).to_bits());
            }
        }
    }

    #[test]
    fn failing_cell_is_flagged_not_fatal() {
        let (p, s, n) = quick();
        // eta = 0 fails parameter validation in that one cell only.
        let a1 = SweepAxis::list(SweepParam::Eta, vec![0.0, 0.45]);
        let a2 = SweepAxis::list(SweepParam::TauOh, vec![15e-6]);
        let sweep = run_sweep(&p, &s, &n, &a1, &a2).unwrap();
        assert!(sweep.value(0, 0).is_nan());
        assert!(sweep.flag(0, 0).failure.is_some());
        assert!(sweep.value(1, 0).is_finite());
    }

    #[test]
    fn validation_requires_gaussian_limit() {
        let (p, _, n) = quick();
        assert!(gaussian_validation(&p, &n, &[1e-6]).is_err());
        let rows = gaussian_validation(&p.with_t1(f64::INFINITY), &n, &[0.2e-6]).unwrap();
        let snr2 = p.snr_squared(0.2e-6).unwrap();
        assert_eq!(rows[0].c_theory, snr2 / 8.0);
    }

    #[test]
    fn export_rows_follow_grid() {
        let (p, s, n) = quick();
        let grid = [0.1e-6, 0.5e-6, 1e-6, 2e-6];
        let rows = export_curves(&p, &s, &n, &grid);
        assert_eq!(rows.len(), 4);
        for (row, tau) in rows.iter().zip(grid) {
            assert_eq!(row.tau, tau);
            assert_eq!(row.snr2, p.snr_squared(tau).unwrap());
            assert!(row.error.is_none());
        }
        let bad = export_curves(&p, &s, &n, &[-1e-6]);
        assert!(bad[0].error.is_some());
    }
}
