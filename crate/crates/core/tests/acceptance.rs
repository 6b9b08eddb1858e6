//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails. Tolerances are pinned here, not derived
//! from the implementation.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use readout_chernoff::distributions::{build_excited, build_ground, Hypothesis, ScoreDistribution};
use readout_chernoff::metrics::{chernoff, info_efficiency, make_xgrid, PairOnGrid};
use readout_chernoff::sweeps::{gaussian_validation, run_sweep, Spacing, SweepAxis, SweepParam};
use readout_chernoff::throughput::{linear_surrogate_check, stationarity_residual, Trend};
use readout_chernoff::validate::continuity_check;
use readout_chernoff::{speedup, CertificationSpec, Numerics, OptimumReport, PhysicalParams, ReadoutCurve};

const US: f64 = 1e-6;

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn fmt_us(t: f64) -> String {
    format!("{:.4} us", t / US)
}

struct Suite {
    failures: usize,
    baseline: Option<OptimumReport>,
}

impl Suite {
    fn run(
        &mut self,
        id: &str,
        title: &str,
        budget: Option<Duration>,
        body: impl FnOnce(&mut Self) -> Outcome,
    ) {
        let start = Instant::now();
        let mut out = body(self);
        let elapsed = start.elapsed();
        if let Some(limit) = budget {
            if elapsed > limit {
                out.passed = false;
                out.detail = format!("{}; runtime {:.1?} exceeds {:?}", out.detail, elapsed, limit);
            }
        }
        if !out.passed {
            self.failures += 1;
        }
        println!(
            "{} criterion {id:>2} [{title}] {} ({:.2?})",
            if out.passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed
        );
    }

    fn baseline(&mut self) -> OptimumReport {
        *self.baseline.get_or_insert_with(|| {
            speedup(
                &PhysicalParams::baseline(),
                &CertificationSpec::default(),
                &Numerics::default(),
            )
            .expect("baseline optimization")
        })
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    readout_chernoff::quadrature::log_space(lo, hi, n)
}

fn c1_gaussian_limit() -> Outcome {
    let params = PhysicalParams::baseline().with_t1(f64::INFINITY);
    let rows = gaussian_validation(&params, &Numerics::default(), &log_grid(0.05 * US, 3.0 * US, 30))
        .expect("gaussian validation");
    let worst = rows.iter().map(|r| r.relative_residual()).fold(0.0f64, f64::max);
    check(
        rows.len() == 30 && worst < 1e-3,
        format!(
            "worst |C_num - SNR^2/8|/(SNR^2/8) = {worst:.3e} over {} points (< 1e-3)",
            rows.len()
        ),
    )
}

fn c2_unit_gaussian() -> Outcome {
    let n = Numerics::default();
    let mut worst_rel = 0.0f64;
    let mut worst_s = 0.0f64;
    for d in [1.0f64, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let p = ScoreDistribution::gaussian(Hypothesis::Ground, -d / 2.0).unwrap();
        let q = ScoreDistribution::gaussian(Hypothesis::Excited, d / 2.0).unwrap();
        let grid = make_xgrid(&p, &q, n.x_grid_margin, n.x_grid_max_spacing).unwrap();
        let r = chernoff(&p, &q, grid, n.s_tol).unwrap();
        worst_rel = worst_rel.max((r.c - d * d / 8.0).abs() / (d * d / 8.0));
        worst_s = worst_s.max((r.s_star - 0.5).abs());
    }
    check(
        worst_rel < 1e-4 && worst_s <= 0.01,
        format!("worst relative error {worst_rel:.2e} (< 1e-4), worst |s* - 0.5| = {worst_s:.2e} (<= 0.01)"),
    )
}

fn c3_short_tau_ceiling() -> Outcome {
    let eta_info = info_efficiency(0.05 * US, &PhysicalParams::baseline(), &Numerics::default()).unwrap();
    check(
        within(eta_info, 0.45, 0.01),
        format!("eta_info(0.05 us) = {eta_info:.4} (0.45 +/- 0.01)"),
    )
}

fn c4_baseline_optima(suite: &mut Suite) -> Outcome {
    let r = suite.baseline();
    let ok = within(r.tau_fid, 0.78 * US, 0.10 * US)
        && within(r.tau_rate, 1.22 * US, 0.15 * US)
        && within(r.speedup, 1.11, 0.03);
    check(
        ok,
        format!(
            "tau_fid = {} (0.78 +/- 0.10), tau_rate = {} (1.22 +/- 0.15), speedup = {:.4} (1.11 +/- 0.03)",
            fmt_us(r.tau_fid),
            fmt_us(r.tau_rate),
            r.speedup
        ),
    )
}

fn c5_efficiency_at_rate(suite: &mut Suite) -> Outcome {
    let r = suite.baseline();
    check(
        within(r.eta_info_at_rate, 0.12, 0.03),
        format!("eta_info(tau_rate) = {:.4} (0.12 +/- 0.03)", r.eta_info_at_rate),
    )
}

fn c6_overhead_amortization() -> Outcome {
    let params = PhysicalParams::baseline().with_t1(f64::INFINITY);
    let numerics = Numerics::default();
    let overheads = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
    let reports: Vec<OptimumReport> = overheads
        .iter()
        .map(|&oh| {
            speedup(
                &params,
                &CertificationSpec::default().with_tau_oh(oh * US),
                &numerics,
            )
            .unwrap()
        })
        .collect();
    let s: Vec<f64> = reports.iter().map(|r| r.speedup).collect();
    let monotone = s.windows(2).all(|w| w[1] >= w[0]);
    let (first, last) = (s[0], s[s.len() - 1]);
    let ok = monotone && within(first, 1.04, 0.03) && within(last, 1.13, 0.03);
    let rates: Vec<String> = reports
        .iter()
        .map(|r| format!("{:.3}", r.tau_rate / US))
        .collect();
    check(
        ok,
        format!(
            "monotone = {monotone}, speedup(5 us) = {first:.4} (1.04 +/- 0.03), speedup(30 us) = {last:.4} (1.13 +/- 0.03); tau_rate/us = [{}]",
            rates.join(", ")
        ),
    )
}

fn c7_sweep_extremum() -> Outcome {
    let params = PhysicalParams::baseline().with_t1(20.0 * US).with_eta(0.5);
    let n_bar = SweepAxis::grid(SweepParam::NBar, 40.0, 120.0, 5, Spacing::Linear);
    let tau_oh = SweepAxis::grid(SweepParam::TauOh, 5.0 * US, 30.0 * US, 6, Spacing::Linear);
    let result = run_sweep(
        &params,
        &CertificationSpec::default(),
        &Numerics::default(),
        &n_bar,
        &tau_oh,
    )
    .unwrap();
    let ((i, j), best) = result.argmax().expect("finite cells");
    let corner = (n_bar.len() - 1, tau_oh.len() - 1);
    check(
        (i, j) == corner && within(best, 1.13, 0.03),
        format!(
            "max {best:.4} (1.13 +/- 0.03) at n_bar = {}, tau_oh = {} us; expected corner n_bar = 120, tau_oh = 30 us",
            n_bar.values()[i],
            tau_oh.values()[j] / US
        ),
    )
}

fn c8_asymmetry_direction() -> Outcome {
    let numerics = Numerics::default();
    let curve = ReadoutCurve::build(
        &PhysicalParams::baseline(),
        &CertificationSpec::default(),
        &numerics,
    )
    .unwrap();
    // s* is located to within the s-search bracket, so "≤ 0.5" is judged at that resolution.
    let max_s = curve
        .points
        .iter()
        .map(|p| p.chernoff.s_star)
        .fold(f64::MIN, f64::max);
    let below_half = max_s <= 0.5 + numerics.s_tol;
    let window: Vec<f64> = curve
        .points
        .iter()
        .filter(|p| p.tau >= 0.5 * US && p.tau <= 2.0 * US)
        .map(|p| p.chernoff.s_star)
        .collect();
    let decreasing = window.len() >= 2 && window.windows(2).all(|w| w[1] < w[0]);
    check(
        below_half && decreasing,
        format!(
            "max s* = {max_s:.6} (<= 0.5), strictly decreasing over {} points in [0.5, 2] us: {decreasing}",
            window.len()
        ),
    )
}

fn c9_stationarity() -> Outcome {
    let params = PhysicalParams::baseline().with_t1(f64::INFINITY);
    let spec = CertificationSpec::default();
    let r = speedup(&params, &spec, &Numerics::default()).unwrap();
    let at_opt = stationarity_residual(r.tau_rate, &params, &spec).unwrap();
    let residuals: Vec<f64> = spec
        .scan_grid()
        .iter()
        .map(|&t| stationarity_residual(t, &params, &spec).unwrap())
        .collect();
    let sign_changes = residuals
        .windows(2)
        .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .count();
    let (lo, hi) = residuals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    check(
        at_opt.abs() < 1e-3 && sign_changes == 1,
        format!(
            "tau_rate = {} (at window edge: {}), residual there = {at_opt:.4e} (|.| < 1e-3), sign changes = {sign_changes} (== 1), residual range [{lo:.3}, {hi:.3}]",
            fmt_us(r.tau_rate),
            r.rate_at_boundary
        ),
    )
}

fn c10_linear_surrogate() -> Outcome {
    let a = PhysicalParams::baseline().snr_squared_slope();
    let mut cases = 0;
    let mut bad = Vec::new();
    for oh in [5.0, 15.0, 30.0] {
        let spec = CertificationSpec::default().with_tau_oh(oh * US);
        let grid = spec.scan_grid();
        for (factor, expected) in [
            (2.0, Trend::Increasing),
            (0.5, Trend::Decreasing),
            (1.01, Trend::Increasing),
            (0.99, Trend::Decreasing),
        ] {
            let b = factor * a * spec.tau_oh;
            let r = linear_surrogate_check(a, b, &spec, &grid).unwrap();
            cases += 1;
            if r.predicted != expected || !r.consistent {
                bad.push(format!("tau_oh = {oh} us, b = {factor} a tau_oh"));
            }
        }
    }
    check(
        bad.is_empty(),
        format!(
            "{} of {cases} (a, b, tau_oh) cases monotone with predicted sign{}",
            cases - bad.len(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", bad.join("; "))
            }
        ),
    )
}

fn c11_properties(suite: &mut Suite) -> Outcome {
    let params = PhysicalParams::baseline();
    let numerics = Numerics::default();
    let mut notes = Vec::new();
    let mut ok = true;

    let cont = continuity_check(&params).unwrap();
    ok &= cont.worst < 1e-12;
    notes.push(format!("continuity gap {:.1e}", cont.worst));

    let mut weight_err = 0.0f64;
    let mut g_err = 0.0f64;
    for tau_us in [0.05, 0.3, 1.0, 2.5, 5.0] {
        let tau = tau_us * US;
        let ground = build_ground(tau, &params).unwrap();
        let excited = build_excited(tau, &params, numerics.jump_nodes).unwrap();
        weight_err = weight_err
            .max((excited.total_weight() - 1.0).abs())
            .max((ground.total_weight() - 1.0).abs());
        let grid = make_xgrid(
            &ground,
            &excited,
            numerics.x_grid_margin,
            numerics.x_grid_max_spacing,
        )
        .unwrap();
        let pair = PairOnGrid::new(&ground, &excited, grid).unwrap();
        for s in [0.0, 1.0] {
            g_err = g_err.max((pair.log_bhattacharyya(s).exp() - 1.0).abs());
        }
    }
    ok &= weight_err <= 1e-12 && g_err <= 1e-9;
    notes.push(format!("weight error {weight_err:.1e}, |g(0|1) - 1| {g_err:.1e}"));

    let base = suite.baseline();
    let spec = CertificationSpec::default();
    for (label, n) in [
        (
            "2x jump nodes",
            Numerics {
                jump_nodes: 2 * numerics.jump_nodes,
                ..numerics
            },
        ),
        (
            "x spacing / 2",
            Numerics {
                x_grid_max_spacing: numerics.x_grid_max_spacing / 2.0,
                ..numerics
            },
        ),
    ] {
        let r = speedup(&params, &spec, &n).unwrap();
        let (dfid, drate, ds) = (
            (r.tau_fid - base.tau_fid).abs(),
            (r.tau_rate - base.tau_rate).abs(),
            (r.speedup - base.speedup).abs(),
        );
        ok &= dfid < 0.01 * US && drate < 0.01 * US && ds < 0.005;
        notes.push(format!(
            "{label}: d tau_fid {:.1e} us, d tau_rate {:.1e} us, d speedup {ds:.1e}",
            dfid / US,
            drate / US
        ));
    }

    // Same result regardless of how many workers evaluate the curve.
    let serialized = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| serde_json::to_string(&speedup(&params, &spec, &numerics).unwrap()).unwrap())
    };
    let reference = serde_json::to_string(&base).unwrap();
    let identical = serialized(1) == reference && serialized(3) == reference;
    ok &= identical;
    notes.push(format!("byte-identical reruns (1 and 3 threads): {identical}"));

    check(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let mut suite = Suite {
        failures: 0,
        baseline: None,
    };
    suite.run(
        "1",
        "Gaussian-limit identity",
        Some(Duration::from_secs(10)),
        |_| c1_gaussian_limit(),
    );
    suite.run(
        "2",
        "unit-Gaussian Chernoff oracle",
        Some(Duration::from_secs(5)),
        |_| c2_unit_gaussian(),
    );
    suite.run("3", "short-tau efficiency ceiling", None, |_| {
        c3_short_tau_ceiling()
    });
    suite.run(
        "4",
        "baseline optima",
        Some(Duration::from_secs(120)),
        c4_baseline_optima,
    );
    suite.run(
        "5",
        "efficiency at throughput optimum",
        None,
        c5_efficiency_at_rate,
    );
    suite.run("6", "overhead amortization, T1 = inf", None, |_| {
        c6_overhead_amortization()
    });
    suite.run("7", "sweep extremum", None, |_| c7_sweep_extremum());
    suite.run("8", "asymmetry direction", None, |_| c8_asymmetry_direction());
    suite.run("9", "stationarity certificate", None, |_| c9_stationarity());
    suite.run("10", "linear-surrogate falsifier", None, |_| {
        c10_linear_surrogate()
    });
    suite.run("11", "property suite", None, c11_properties);
    println!("acceptance: {} of 11 criteria failed", suite.failures);
    if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
