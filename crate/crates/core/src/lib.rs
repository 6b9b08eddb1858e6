//! Chernoff-information analysis of dispersive qubit readout.
//!
//! The crate models the matched-filter score of a dispersively measured qubit,
//! including T1 decay during the integration window with the cavity field kept
//! continuous across the jump, and asks which integration time minimizes the
//! wall-clock time needed to certify the qubit state to a target error.
//!
//! Layers, bottom up:
//!
//! - [`physics`]: cavity response Δα(t), SNR², decayed trajectories and the
//!   matched-filter overlap ratio.
//! - [`distributions`]: ground/excited score mixtures of unit Gaussians.
//! - [`metrics`]: Chernoff information, Bayes fidelity, efficiency benchmark.
//! - [`throughput`]: certification time, τ optimizers, speedup.
//! - [`sweeps`]: parameter heatmaps, Gaussian-limit validation, curve export.
//! - [`config`] and [`output`]: run configuration and CSV/JSON emission used
//!   by the `readout-chernoff` binary.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod distributions;
pub mod error;
pub mod metrics;
pub mod numerics;
pub mod output;
pub mod physics;
pub mod quadrature;
pub mod sweeps;
pub mod throughput;
pub mod validate;

#[cfg(test)]
pub(crate) mod oracles;

pub use distributions::{build_excited, build_ground, Hypothesis, JumpQuadrature, ScoreDistribution};
pub use error::{Error, Result};
pub use metrics::{
    bayes_fidelity, chernoff, ideal_chernoff, info_efficiency, ChernoffResult, ReadoutPoint, XGrid,
};
pub use numerics::Numerics;
pub use physics::PhysicalParams;
pub use throughput::{
    certification_time, optimize_tau_fid, optimize_tau_rate, speedup, CertificationSpec, OptimumReport,
    ReadoutCurve,
};
