//! Distinguishability of two score distributions: Chernoff information with
//! its optimal exponent s*, Bayes fidelity, and the unit-efficiency benchmark.

use serde::{Deserialize, Serialize};

use crate::distributions::{build_excited, build_ground, ScoreDistribution};
use crate::error::{domain, Error, Result};
use crate::numerics::Numerics;
use crate::physics::PhysicalParams;
use crate::quadrature::{golden_section_min, simpson_weights};

/// Densities at the grid edges must sit this far below the peak.
const CLIP_RATIO: f64 = 1e-12;
/// 1 − F below this is reported as saturated.
const FIDELITY_SATURATION: f64 = 1e-12;
const S_SCAN_POINTS: usize = 21;
const MIN_GRID_POINTS: usize = 101;

/// Uniform score grid for Simpson integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGrid {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl XGrid {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Contract(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        if n_points < MIN_GRID_POINTS || n_points.is_multiple_of(2) {
            return Err(Error::Contract(format!(
                "grid needs an odd point count >= {MIN_GRID_POINTS}, got {n_points}"
            )));
        }
        Ok(Self { lo, hi, n_points })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n_points)
            .map(|i| {
                if i == self.n_points - 1 {
                    self.hi
                } else {
                    self.lo + h * i as f64
                }
            })
            .collect()
    }
}

/// Grid spanning every component mean of both mixtures plus `margin` σ on each
/// side, with spacing at most `max_spacing`.
pub fn make_xgrid(
    p: &ScoreDistribution,
    q: &ScoreDistribution,
    margin: f64,
    max_spacing: f64,
) -> Result<XGrid> {
    if !(margin >= 6.0) {
        return Err(domain("margin", margin));
    }
    if !(max_spacing > 0.0) {
        return Err(domain("max_spacing", max_spacing));
    }
    let (plo, phi) = p.mean_range();
    let (qlo, qhi) = q.mean_range();
    let lo = plo.min(qlo) - margin;
    let hi = phi.max(qhi) + margin;
    let intervals = ((hi - lo) / max_spacing).ceil() as usize;
    let mut n = (intervals + 1).max(MIN_GRID_POINTS);
    if n.is_multiple_of(2) {
        n += 1;
    }
    XGrid::new(lo, hi, n)
}

/// Chernoff information C = −log min_s ∫ p^s q^{1−s} dx and its minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChernoffResult {
    pub c: f64,
    pub s_star: f64,
    /// min_s ∫ p^s q^{1−s}. May underflow to zero for very large `c`.
    pub integral_value: f64,
}

/// Bayes fidelity with a saturation marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fidelity {
    pub value: f64,
    /// Set when 1 − F fell below 1e-12 and `value` was clamped to 1.
    pub saturated: bool,
}

/// Log densities of a distribution pair tabulated on a shared grid, reused by
/// every functional in this module.
#[derive(Debug, Clone)]
pub struct PairOnGrid {
    grid: XGrid,
    log_p: Vec<f64>,
    log_q: Vec<f64>,
    log_w: Vec<f64>,
}

impl PairOnGrid {
    /// Tabulates both densities and rejects grids that clip either mixture.
    pub fn new(p: &ScoreDistribution, q: &ScoreDistribution, grid: XGrid) -> Result<Self> {
        let xs = grid.points();
        let log_p = p.log_pdf_many(&xs);
        let log_q = q.log_pdf_many(&xs);
        check_clipping(&grid, &log_p)?;
        check_clipping(&grid, &log_q)?;
        let log_w = simpson_weights(grid.n_points, grid.spacing())
            .into_iter()
            .map(f64::ln)
            .collect();
        Ok(Self {
            grid,
            log_p,
            log_q,
            log_w,
        })
    }

    pub fn grid(&self) -> &XGrid {
        &self.grid
    }

    /// log ∫ p^s q^{1−s} dx.
    pub fn log_bhattacharyya(&self, s: f64) -> f64 {
        let t = 1.0 - s;
        let terms = self
            .log_p
            .iter()
            .zip(&self.log_q)
            .zip(&self.log_w)
            .map(|((lp, lq), lw)| s * lp + t * lq + lw);
        let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
        max + terms.map(|v| (v - max).exp()).sum::<f64>().ln()
    }

    /// Minimizes the Chernoff integral over s ∈ [0, 1]: a 21-point scan, then
    /// golden-section refinement on the bracket around the best scan point.
    pub fn chernoff(&self, s_tol: f64) -> ChernoffResult {
        let scan: Vec<(f64, f64)> = (0..S_SCAN_POINTS)
            .map(|i| {
                let s = i as f64 / (S_SCAN_POINTS - 1) as f64;
                (s, self.log_bhattacharyya(s))
            })
            .collect();
        let (min, max) = scan
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
                (lo.min(v), hi.max(v))
            });
        let (s_star, log_min) = if max - min <= 1e-13 {
            // Indistinguishable pair: every s is optimal.
            (0.5, self.log_bhattacharyya(0.5).min(0.0))
        } else {
            // Ties go to the point nearest s = 1/2 so that swapping p and q mirrors s*.
            let best = (0..S_SCAN_POINTS)
                .min_by(|&a, &b| {
                    scan[a]
                        .1
                        .total_cmp(&scan[b].1)
                        .then((scan[a].0 - 0.5).abs().total_cmp(&(scan[b].0 - 0.5).abs()))
                })
                .expect("scan is non-empty");
            let lo = scan[best.saturating_sub(1)].0;
            let hi = scan[(best + 1).min(S_SCAN_POINTS - 1)].0;
            let refined = golden_section_min(|s| self.log_bhattacharyya(s), lo, hi, s_tol);
            if refined.value < scan[best].1 {
                (refined.x, refined.value)
            } else {
                scan[best]
            }
        };
        let log_min = log_min.min(0.0);
        ChernoffResult {
            c: -log_min,
            s_star,
            integral_value: log_min.exp(),
        }
    }

    /// F = 1 − ½ ∫ min(p, q) dx.
    pub fn fidelity(&self) -> Fidelity {
        let overlap: f64 = self
            .log_p
            .iter()
            .zip(&self.log_q)
            .zip(&self.log_w)
            .map(|((lp, lq), lw)| (lp.min(*lq) + lw).exp())
            .sum();
        let f = (1.0 - 0.5 * overlap).clamp(0.5, 1.0);
        if 1.0 - f < FIDELITY_SATURATION {
            Fidelity {
                value: 1.0,
                saturated: true,
            }
        } else {
            Fidelity {
                value: f,
                saturated: false,
            }
        }
    }
}

fn check_clipping(grid: &XGrid, log_pdf: &[f64]) -> Result<()> {
    let peak = log_pdf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let edge = log_pdf[0].max(log_pdf[log_pdf.len() - 1]);
    let log_ratio = edge - peak;
    if log_ratio > CLIP_RATIO.ln() {
        return Err(Error::GridClipped {
            lo: grid.lo,
            hi: grid.hi,
            ratio: log_ratio.exp(),
        });
    }
    Ok(())
}

pub fn chernoff(
    p: &ScoreDistribution,
    q: &ScoreDistribution,
    grid: XGrid,
    s_tol: f64,
) -> Result<ChernoffResult> {
    Ok(PairOnGrid::new(p, q, grid)?.chernoff(s_tol))
}

pub fn bayes_fidelity(p: &ScoreDistribution, q: &ScoreDistribution, grid: XGrid) -> Result<Fidelity> {
    Ok(PairOnGrid::new(p, q, grid)?.fidelity())
}

/// Chernoff information at unit detection efficiency and no decay,
/// κ n̄ ∫₀^τ Δα² dt / 8.
pub fn ideal_chernoff(tau: f64, params: &PhysicalParams) -> Result<f64> {
    Ok(params.with_eta(1.0).snr_squared(tau)? / 8.0)
}

/// Everything the optimizers and exporters need at one integration time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutPoint {
    pub tau: f64,
    pub snr_squared: f64,
    pub chernoff: ChernoffResult,
    pub fidelity: Fidelity,
    pub ideal_chernoff: f64,
}

impl ReadoutPoint {
    /// Builds both score distributions at `tau` and evaluates every metric on
    /// one shared grid.
    pub fn evaluate(tau: f64, params: &PhysicalParams, numerics: &Numerics) -> Result<Self> {
        let ground = build_ground(tau, params)?;
        let excited = build_excited(tau, params, numerics.jump_nodes)?;
        let grid = make_xgrid(
            &ground,
            &excited,
            numerics.x_grid_margin,
            numerics.x_grid_max_spacing,
        )?;
        let pair = PairOnGrid::new(&ground, &excited, grid)?;
        Ok(Self {
            tau,
            snr_squared: params.snr_squared_unchecked(tau),
            chernoff: pair.chernoff(numerics.s_tol),
            fidelity: pair.fidelity(),
            ideal_chernoff: ideal_chernoff(tau, params)?,
        })
    }

    /// C / C_ideal.
    pub fn eta_info(&self) -> f64 {
        self.chernoff.c / self.ideal_chernoff
    }
}

/// Information-extraction efficiency η_info(τ) = C(τ) / C_ideal(τ).
pub fn info_efficiency(tau: f64, params: &PhysicalParams, numerics: &Numerics) -> Result<f64> {
    Ok(ReadoutPoint::evaluate(tau, params, numerics)?.eta_info())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Component, Hypothesis};
    use approx::assert_relative_eq;

    fn unit(mean: f64) -> ScoreDistribution {
        ScoreDistribution::gaussian(Hypothesis::Ground, mean).unwrap()
    }

    fn grid_for(p: &ScoreDistribution, q: &ScoreDistribution) -> XGrid {
        make_xgrid(p, q, 12.0, 0.02).unwrap()
    }

    #[test]
    fn xgrid_examples() {
        let (p, q) = (unit(-2.0), unit(2.0));
        let g = grid_for(&p, &q);
        assert_eq!((g.lo, g.hi), (-14.0, 14.0));
        assert!(g.spacing() <= 0.02);
        assert_eq!(g.n_points % 2, 1);
        let single = grid_for(&p, &p);
        assert!(single.spacing() <= 0.02);
        assert!(make_xgrid(&p, &q, 5.0, 0.02).is_err());
    }

    #[test]
    fn xgrid_baseline_span() {
        let params = PhysicalParams::new(
            2.0 * std::f64::consts::PI * 1.2e6,
            2.0 * std::f64::consts::PI * 5.0e6,
            80.0,
            0.45,
            30e-6,
        )
        .unwrap();
        let g = build_ground(1e-6, &params).unwrap();
        let e = build_excited(1e-6, &params, 200).unwrap();
        let grid = grid_for(&g, &e);
        assert!((grid.lo + 27.35).abs() < 0.05 && (grid.hi - 27.35).abs() < 0.05);
    }

    #[test]
    fn identical_pair_has_zero_information() {
        let p = unit(0.3);
        let r = chernoff(&p, &p, grid_for(&p, &p), 1e-5).unwrap();
        assert!(r.c.abs() < 1e-12);
        assert_eq!(r.s_star, 0.5);
        assert_relative_eq!(r.c, -r.integral_value.ln(), epsilon = 1e-12);
        let pair = PairOnGrid::new(&p, &p, grid_for(&p, &p)).unwrap();
        for s in [0.0, 0.3, 1.0] {
            assert!((pair.log_bhattacharyya(s)).abs() < 1e-12);
        }
        let f = bayes_fidelity(&p, &p, grid_for(&p, &p)).unwrap();
        assert_relative_eq!(f.value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn separated_gaussians_match_closed_form() {
        let (p, q) = (unit(-2.0), unit(2.0));
        let r = chernoff(&p, &q, grid_for(&p, &q), 1e-5).unwrap();
        assert_relative_eq!(r.c, 2.0, max_relative = 1e-8);
        assert!((r.s_star - 0.5).abs() < 1e-4);
    }

    #[test]
    fn brute_force_s_scan_agrees() {
        // Mixture pair with a genuinely asymmetric optimum.
        let p = unit(-3.0);
        let q = ScoreDistribution::new(
            Hypothesis::Excited,
            vec![
                Component {
                    weight: 0.9,
                    mean: 3.0,
                },
                Component {
                    weight: 0.1,
                    mean: -1.0,
                },
            ],
        )
        .unwrap();
        let grid = grid_for(&p, &q);
        let pair = PairOnGrid::new(&p, &q, grid).unwrap();
        let brute = (0..=10_000)
            .map(|i| {
                let s = i as f64 / 10_000.0;
                (s, pair.log_bhattacharyya(s))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let r = pair.chernoff(1e-5);
        assert_relative_eq!(r.c, -brute.1, max_relative = 1e-8);
        assert!((r.s_star - brute.0).abs() < 2e-4);
        assert!(r.s_star < 0.5);
    }

    #[test]
    fn normalization_at_s_endpoints() {
        let params = PhysicalParams::baseline();
        let g = build_ground(1.5e-6, &params).unwrap();
        let e = build_excited(1.5e-6, &params, 200).unwrap();
        let pair = PairOnGrid::new(&g, &e, grid_for(&g, &e)).unwrap();
        assert!(pair.log_bhattacharyya(0.0).abs() < 1e-9);
        assert!(pair.log_bhattacharyya(1.0).abs() < 1e-9);
    }

    #[test]
    fn swap_mirrors_s_star() {
        let params = PhysicalParams::baseline();
        let g = build_ground(1e-6, &params).unwrap();
        let e = build_excited(1e-6, &params, 200).unwrap();
        let grid = grid_for(&g, &e);
        let a = chernoff(&g, &e, grid, 1e-5).unwrap();
        let b = chernoff(&e, &g, grid, 1e-5).unwrap();
        assert!((a.c - b.c).abs() < 1e-9);
        assert!((a.s_star - (1.0 - b.s_star)).abs() < 2e-5);
    }

    #[test]
    fn baseline_optimal_exponent_is_biased_low() {
        let params = PhysicalParams::baseline();
        let g = build_ground(1e-6, &params).unwrap();
        let e = build_excited(1e-6, &params, 200).unwrap();
        let r = chernoff(&g, &e, grid_for(&g, &e), 1e-5).unwrap();
        assert!(r.s_star < 0.5);
        assert!(r.c > 0.0);
    }

    #[test]
    fn fidelity_examples() {
        let (p, q) = (unit(-1.0), unit(1.0));
        let f = bayes_fidelity(&p, &q, grid_for(&p, &q)).unwrap();
        let expected = 1.0 - 0.5 * statrs::function::erf::erfc(2.0 / (2.0 * 2f64.sqrt()));
        assert_relative_eq!(f.value, expected, epsilon = 1e-6);
        assert!(!f.saturated);

        let (p, q) = (unit(-30.0), unit(30.0));
        let f = bayes_fidelity(&p, &q, grid_for(&p, &q)).unwrap();
        assert_eq!(f.value, 1.0);
        assert!(f.saturated);
    }

    #[test]
    fn clipped_grid_is_rejected() {
        let (p, q) = (unit(-2.0), unit(2.0));
        let narrow = XGrid::new(-3.0, 3.0, 301).unwrap();
        assert!(matches!(
            chernoff(&p, &q, narrow, 1e-5),
            Err(Error::GridClipped { .. })
        ));
        assert!(matches!(
            bayes_fidelity(&p, &q, narrow),
            Err(Error::GridClipped { .. })
        ));
    }

    #[test]
    fn ideal_chernoff_scales_out_eta() {
        let params = PhysicalParams::baseline();
        assert_eq!(ideal_chernoff(0.0, &params).unwrap(), 0.0);
        let tau = 1e-6;
        assert_relative_eq!(
            ideal_chernoff(tau, &params).unwrap(),
            params.snr_squared(tau).unwrap() / (8.0 * params.eta),
            max_relative = 1e-14
        );
        assert_eq!(
            ideal_chernoff(tau, &params).unwrap(),
            ideal_chernoff(tau, &params.with_t1(f64::INFINITY).with_eta(0.9)).unwrap()
        );
        assert!(ideal_chernoff(-1.0, &params).is_err());
    }

    #[test]
    fn ideal_chernoff_cyclic_baseline() {
        let params = PhysicalParams::new(
            2.0 * std::f64::consts::PI * 1.2e6,
            2.0 * std::f64::consts::PI * 5.0e6,
            80.0,
            0.45,
            30e-6,
        )
        .unwrap();
        let v = ideal_chernoff(1e-6, &params).unwrap();
        assert!((v - 261.9).abs() < 0.2, "{v}");
    }

    #[test]
    fn info_efficiency_gaussian_limit_equals_eta() {
        let params = PhysicalParams::baseline().with_t1(f64::INFINITY);
        for tau in [0.1e-6, 1e-6, 2.5e-6] {
            let e = info_efficiency(tau, &params, &Numerics::default()).unwrap();
            assert_relative_eq!(e, params.eta, max_relative = 1e-6);
        }
    }

    #[test]
    fn info_efficiency_short_tau_near_eta() {
        let e = info_efficiency(0.05e-6, &PhysicalParams::baseline(), &Numerics::default()).unwrap();
        assert!((e - 0.45).abs() < 0.01, "{e}");
        assert!(e <= 0.45 + 1e-9);
    }
}
