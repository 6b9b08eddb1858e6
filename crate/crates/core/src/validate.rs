//! Self-consistency checks run by the `validate` subcommand.

use serde::Serialize;

use crate::distributions::{build_excited, Hypothesis, ScoreDistribution};
use crate::error::Result;
use crate::metrics::{chernoff, make_xgrid, ReadoutPoint};
use crate::numerics::Numerics;
use crate::physics::PhysicalParams;
use crate::quadrature::log_space;
use crate::sweeps::{gaussian_validation, ValidationRow};

pub const GAUSSIAN_RESIDUAL_TOL: f64 = 1e-3;
pub const UNIT_GAUSSIAN_REL_TOL: f64 = 1e-4;
pub const UNIT_GAUSSIAN_S_TOL: f64 = 0.01;
pub const CONTINUITY_TOL: f64 = 1e-12;
pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const JUMP_CONVERGENCE_TOL: f64 = 1e-6;

/// T1 used by the decay-dependent checks when the configured T1 is infinite.
const FALLBACK_T1: f64 = 30e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed error for the check.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub table: Vec<ValidationRow>,
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn outcome(name: &'static str, worst: f64, tolerance: f64, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst < tolerance,
        worst,
        tolerance,
        detail,
    }
}

/// C from the numerical pipeline against SNR²/8 on a 30-point log grid over
/// [0.05, 3] µs with T1 removed.
pub fn gaussian_residual_check(
    params: &PhysicalParams,
    numerics: &Numerics,
) -> Result<(Vec<ValidationRow>, CheckOutcome)> {
    let grid = log_space(0.05e-6, 3e-6, 30);
    let table = gaussian_validation(&params.with_t1(f64::INFINITY), numerics, &grid)?;
    let (worst, at) = table
        .iter()
        .map(|r| (r.relative_residual(), r.tau))
        .fold((0.0f64, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc });
    Ok((
        table,
        outcome(
            "gaussian_limit_residual",
            worst,
            GAUSSIAN_RESIDUAL_TOL,
            format!("max |C_num - SNR²/8|/(SNR²/8) at tau = {:.4} us", at * 1e6),
        ),
    ))
}

/// Unit Gaussians at ±d/2 for d ∈ {1, 2, 4, 8, 16, 32}: C = d²/8, s* = 1/2.
pub fn unit_gaussian_check(numerics: &Numerics) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut worst_s = 0.0f64;
    for d in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let p = ScoreDistribution::gaussian(Hypothesis::Ground, -0.5 * d)?;
        let q = ScoreDistribution::gaussian(Hypothesis::Excited, 0.5 * d)?;
        let grid = make_xgrid(&p, &q, numerics.x_grid_margin, numerics.x_grid_max_spacing)?;
        let r = chernoff(&p, &q, grid, numerics.s_tol)?;
        let exact = d * d / 8.0;
        worst = worst.max((r.c - exact).abs() / exact);
        worst_s = worst_s.max((r.s_star - 0.5).abs());
    }
    let mut o = outcome(
        "unit_gaussian_identity",
        worst,
        UNIT_GAUSSIAN_REL_TOL,
        format!("max relative error of C vs d²/8; max |s* - 0.5| = {worst_s:.2e}"),
    );
    o.passed &= worst_s <= UNIT_GAUSSIAN_S_TOL;
    Ok(o)
}

/// Jump in the decayed trajectory across t_j.
pub fn continuity_check(params: &PhysicalParams) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for tj_us in [0.05, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let tj = tj_us * 1e-6;
        let before = params.decayed_trajectory(tj * (1.0 - 1e-14), tj)?;
        let after = params.decayed_trajectory(tj, tj)?;
        worst = worst.max((before - after).abs());
    }
    Ok(outcome(
        "trajectory_continuity",
        worst,
        CONTINUITY_TOL,
        "max |alpha(t_j-) - alpha(t_j+)|".into(),
    ))
}

fn decaying(params: &PhysicalParams) -> PhysicalParams {
    if params.is_gaussian_limit() {
        params.with_t1(FALLBACK_T1)
    } else {
        *params
    }
}

/// Excited mixture weights sum to one.
pub fn normalization_check(params: &PhysicalParams, numerics: &Numerics) -> Result<CheckOutcome> {
    let p = decaying(params);
    let mut worst = 0.0f64;
    for tau_us in [0.05, 0.5, 1.0, 2.0, 5.0] {
        let e = build_excited(tau_us * 1e-6, &p, numerics.jump_nodes)?;
        worst = worst.max((e.total_weight() - 1.0).abs());
    }
    Ok(outcome(
        "mixture_normalization",
        worst,
        NORMALIZATION_TOL,
        format!("max |sum w - 1| at T1 = {} us", p.t1 * 1e6),
    ))
}

/// Relative change of C(1 µs) when the jump-node count is doubled.
pub fn jump_convergence_check(params: &PhysicalParams, numerics: &Numerics) -> Result<CheckOutcome> {
    let p = decaying(params);
    let tau = 1e-6;
    let coarse = ReadoutPoint::evaluate(tau, &p, numerics)?.chernoff.c;
    let fine_numerics = Numerics {
        jump_nodes: 2 * numerics.jump_nodes,
        ..*numerics
    };
    let fine = ReadoutPoint::evaluate(tau, &p, &fine_numerics)?.chernoff.c;
    Ok(outcome(
        "jump_node_convergence",
        (coarse - fine).abs() / fine.abs(),
        JUMP_CONVERGENCE_TOL,
        format!(
            "C(1 us) with {} vs {} jump nodes",
            numerics.jump_nodes, fine_numerics.jump_nodes
        ),
    ))
}

pub fn run_checks(params: &PhysicalParams, numerics: &Numerics) -> Result<ValidationReport> {
    let (table, gaussian) = gaussian_residual_check(params, numerics)?;
    let checks = vec![
        gaussian,
        unit_gaussian_check(numerics)?,
        continuity_check(params)?,
        normalization_check(params, numerics)?,
        jump_convergence_check(params, numerics)?,
    ];
    Ok(ValidationReport { table, checks })
}
