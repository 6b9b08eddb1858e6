use serde::{Deserialize, Serialize};

use crate::distributions::DEFAULT_JUMP_NODES;
use crate::error::{config, Result};

/// Discretization knobs shared by the metric and optimization layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Numerics {
    /// Score-grid padding beyond the outermost component means, in σ.
    pub x_grid_margin: f64,
    /// Largest allowed score-grid spacing, in σ.
    pub x_grid_max_spacing: f64,
    /// Gauss–Legendre nodes for the decay-time integral.
    pub jump_nodes: usize,
    /// Bracket width at which the Chernoff-parameter search stops.
    pub s_tol: f64,
    /// Bracket width (seconds) at which the τ refinements stop.
    pub tau_tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            x_grid_margin: 12.0,
            x_grid_max_spacing: 0.02,
            jump_nodes: DEFAULT_JUMP_NODES,
            s_tol: 1e-5,
            tau_tol: 1e-9,
        }
    }
}

impl Numerics {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_grid_margin >= 6.0 && self.x_grid_margin.is_finite()) {
            return Err(config("x_grid_margin", "must be finite and >= 6"));
        }
        if !(self.x_grid_max_spacing > 0.0 && self.x_grid_max_spacing.is_finite()) {
            return Err(config("x_grid_max_spacing", "must be finite and > 0"));
        }
        if self.jump_nodes < 2 {
            return Err(config("jump_nodes", "must be >= 2"));
        }
        if !(self.s_tol > 0.0 && self.s_tol < 0.05) {
            return Err(config("s_tol", "must lie in (0, 0.05)"));
        }
        if !(self.tau_tol > 0.0 && self.tau_tol.is_finite()) {
            return Err(config("tau_tol", "must be finite and > 0"));
        }
        Ok(())
    }
}
