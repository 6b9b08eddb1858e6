//! Matched-filter score distributions for the two qubit hypotheses.
//!
//! Both hypotheses are finite mixtures of unit-variance Gaussians. Scores are
//! scaled so that the undecayed states sit at ±SNR(τ)/2; a trajectory that
//! decays at `t_j` lands at `r(t_j)·SNR(τ)/2` with `r` the overlap ratio.
//! Densities are evaluated in the log domain throughout.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::physics::PhysicalParams;
use crate::quadrature::GaussLegendre;

/// Default number of jump-time nodes.
pub const DEFAULT_JUMP_NODES: usize = 200;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Ground,
    Excited,
}

/// One unit-variance Gaussian component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
}

/// Mixture of unit-variance Gaussians. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreDistribution {
    label: Hypothesis,
    components: Vec<Component>,
    log_weights: Vec<f64>,
}

impl ScoreDistribution {
    /// Validates weights (positive, summing to one within 1e-12) and means (finite).
    pub fn new(label: Hypothesis, components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Contract("a mixture needs at least one component".into()));
        }
        let mut total = 0.0;
        for c in &components {
            if !(c.weight > 0.0) {
                return Err(Error::Contract(format!(
                    "non-positive mixture weight {}",
                    c.weight
                )));
            }
            if !c.mean.is_finite() {
                return Err(Error::Contract(format!("non-finite component mean {}", c.mean)));
            }
            total += c.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!("mixture weights sum to {total}")));
        }
        let log_weights = components.iter().map(|c| c.weight.ln()).collect();
        Ok(Self {
            label,
            components,
            log_weights,
        })
    }

    /// A single unit Gaussian centred at `mean`.
    pub fn gaussian(label: Hypothesis, mean: f64) -> Result<Self> {
        Self::new(label, vec![Component { weight: 1.0, mean }])
    }

    pub fn label(&self) -> Hypothesis {
        self.label
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    /// Smallest and largest component mean.
    pub fn mean_range(&self) -> (f64, f64) {
        self.components
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                (lo.min(c.mean), hi.max(c.mean))
            })
    }

    /// log Σᵢ wᵢ N(x; μᵢ, 1), via log-sum-exp. Finite for any finite `x`.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let terms = self
            .components
            .iter()
            .zip(&self.log_weights)
            .map(|(c, lw)| lw - 0.5 * (x - c.mean) * (x - c.mean));
        let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = terms.map(|v| (v - max).exp()).sum();
        max + sum.ln() - HALF_LN_2PI
    }

    pub fn log_pdf_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.log_pdf(x)).collect()
    }
}

/// Jump-time nodes on `(0, τ)` with weights carrying the decay probability
/// mass `1 − e^{−τ/T1}` of each sub-interval.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JumpQuadrature {
    /// Gauss–Legendre rule against the density (1/T1) e^{−t/T1} on `(0, τ)`,
    /// rescaled so the weights sum to exactly `1 − e^{−τ/T1}`.
    pub fn new(tau: f64, t1: f64, n_nodes: usize) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(domain("tau", tau));
        }
        if !(t1 > 0.0) {
            return Err(domain("t1", t1));
        }
        if t1.is_infinite() {
            return Err(Error::Contract(
                "jump quadrature requires finite T1; use the survival-only path".into(),
            ));
        }
        if n_nodes < 2 {
            return Err(Error::Contract(format!(
                "need at least 2 jump nodes, got {n_nodes}"
            )));
        }
        let rule = GaussLegendre::new(n_nodes);
        let (nodes, mut weights): (Vec<f64>, Vec<f64>) = rule
            .mapped(0.0, tau)
            .map(|(t, w)| (t, w * (-t / t1).exp() / t1))
            .unzip();
        let mass = decay_mass(tau, t1);
        let raw: f64 = weights.iter().sum();
        for w in &mut weights {
            *w *= mass / raw;
        }
        Ok(Self { nodes, weights })
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Probability of at least one decay within `tau`.
fn decay_mass(tau: f64, t1: f64) -> f64 {
    -(-tau / t1).exp_m1()
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(domain("tau", tau))
    }
}

/// Ground-state scores: a single unit Gaussian at −SNR(τ)/2.
pub fn build_ground(tau: f64, params: &PhysicalParams) -> Result<ScoreDistribution> {
    check_tau(tau)?;
    let half = 0.5 * params.snr_squared_unchecked(tau).sqrt();
    ScoreDistribution::gaussian(Hypothesis::Ground, -half)
}

/// Excited-state scores: a survival component at +SNR(τ)/2 with weight
/// e^{−τ/T1}, plus one component per jump node at r(t_j)·SNR(τ)/2.
/// With infinite T1 only the survival component remains.
pub fn build_excited(tau: f64, params: &PhysicalParams, n_nodes: usize) -> Result<ScoreDistribution> {
    check_tau(tau)?;
    let half = 0.5 * params.snr_squared_unchecked(tau).sqrt();
    if params.is_gaussian_limit() {
        return ScoreDistribution::gaussian(Hypothesis::Excited, half);
    }
    let jumps = JumpQuadrature::new(tau, params.t1, n_nodes)?;
    let mut components = Vec::with_capacity(jumps.nodes.len() + 1);
    components.push(Component {
        weight: (-tau / params.t1).exp(),
        mean: half,
    });
    components.extend(
        jumps
            .nodes
            .iter()
            .zip(&jumps.weights)
            .map(|(&t_j, &w)| Component {
                weight: w,
                mean: params.overlap_ratio_unchecked(t_j, tau) * half,
            }),
    );
    ScoreDistribution::new(Hypothesis::Excited, components)
}
