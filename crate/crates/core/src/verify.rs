//! Numerical checks of the structural facts about `r_n`: boundary estimates
//! on the imaginary axis, the Perron identity, the error and derivative
//! estimates, the `L^2` estimates, and the factorial and integrand lemmas.

use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    derivative_lemma_bound, error_lemma_bound, integrand_closed_form, integrand_numeric, l2_bounds,
    l2_norm_numeric, NormKind,
};
use crate::error::{Error, Result};
use crate::pade::{
    derivative_error_term, error_term, eval_rn_with, factorial_estimate_holds, fast_values, pade_coefficients,
    perron_options, perron_remainder_with, EvalOptions, PadePair,
};
use crate::precision::C64;

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub observed: f64,
    /// The limit it is compared against.
    pub limit: f64,
    pub detail: String,
}

/// All checks of one verification run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Grid sizes and ranges for [`run_verify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub axis_points: usize,
    pub axis_t_min: f64,
    pub axis_t_max: f64,
    pub perron_n_max: usize,
    pub perron_points: usize,
    pub error_n_max: usize,
    pub error_radius: f64,
    pub l2_n_max: usize,
    pub l2_alphas: Vec<f64>,
    pub l2_tolerance: f64,
    pub factorial_n_max: usize,
    pub integrand_samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_max: 40,
            axis_points: 2000,
            axis_t_min: 1e-3,
            axis_t_max: 1e6,
            perron_n_max: 10,
            perron_points: 200,
            error_n_max: 20,
            error_radius: 50.0,
            l2_n_max: 30,
            l2_alphas: vec![0.75, 1.0, 2.0],
            l2_tolerance: 1e-8,
            factorial_n_max: 64,
            integrand_samples: 20,
            seed: 0,
        }
    }
}

/// Maxima and minima over the imaginary-axis grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisStats {
    pub min_abs_q: f64,
    pub max_q_ratio: f64,
    pub max_abs_dr: f64,
    pub max_abs_r: f64,
}

impl AxisStats {
    pub fn within(&self, slack: f64) -> bool {
        self.min_abs_q >= 1.0 - slack
            && self.max_q_ratio <= 1.0 + slack
            && self.max_abs_dr <= 2.0 + slack
            && self.max_abs_r <= 1.0 + slack
    }
}

/// `points` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

/// `|Q_n(it)|`, `|Q_n'(it)/Q_n(it)|`, `|r_n'(it)|` and `|r_n(it)|` over `±t` on a log grid.
pub fn axis_stats(pair: &PadePair, t_grid: &[f64]) -> AxisStats {
    let mut s = AxisStats {
        min_abs_q: f64::INFINITY,
        max_q_ratio: 0.0,
        max_abs_dr: 0.0,
        max_abs_r: 0.0,
    };
    for &t in t_grid {
        for z in [C64::new(0.0, t), C64::new(0.0, -t)] {
            let v = fast_values(pair, z);
            s.min_abs_q = s.min_abs_q.min(v.q_abs);
            s.max_q_ratio = s.max_q_ratio.max(v.q_ratio.norm());
            s.max_abs_dr = s.max_abs_dr.max(v.dr.norm());
            s.max_abs_r = s.max_abs_r.max(v.r.norm());
        }
    }
    s
}

/// Deterministic disc grid: `points` samples on concentric circles of radius up to `radius`.
pub fn disc_grid(radius: f64, points: usize) -> Vec<C64> {
    let rings = 10usize;
    let per_ring = points.div_ceil(rings);
    let mut out = Vec::with_capacity(points);
    for i in 0..rings {
        let r = radius * (i as f64 + 1.0) / rings as f64;
        for k in 0..per_ring {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5 * (i % 2) as f64 + 0.25) / per_ring as f64;
            out.push(C64::from_polar(r, theta));
        }
    }
    out.truncate(points);
    out
}

/// Samples of the closed right half-plane: log-spaced radii up to `radius`,
/// angles in `[-π/2, π/2]` including the imaginary axis.
pub fn right_half_plane_grid(radius: f64) -> Vec<C64> {
    let mut out = vec![];
    for r in log_grid(1e-3, radius, 24) {
        for k in 0..=16 {
            let theta = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * k as f64 / 16.0;
            let mut z = C64::from_polar(r, theta);
            if k == 0 || k == 16 {
                z.re = 0.0;
            }
            out.push(z);
        }
    }
    out
}

/// Worst `|perron - (r_n - e^z)| / max(1, |r_n - e^z|)` over a disc grid,
/// and the number of grid points skipped for lying on a pole.
pub fn perron_discrepancy(pair: &PadePair, grid: &[C64]) -> Result<(f64, usize)> {
    let eval = EvalOptions::default();
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for &z in grid {
        let direct = match eval_rn_with(pair, z, &eval) {
            Ok((r, _)) => r - z.exp(),
            Err(Error::PoleProximity { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let perron = perron_remainder_with(pair, z, &perron_options(), &eval)?;
        worst = worst.max((perron - direct).norm() / direct.norm().max(1.0));
    }
    Ok((worst, skipped))
}

/// Worst ratios `|E_n(z)| / bound` and `|D_n(z)| / bound` over a right-half-plane grid.
pub fn error_lemma_ratios(pair: &PadePair, grid: &[C64]) -> Result<(f64, f64)> {
    let n = pair.order();
    let mut worst_e = 0.0f64;
    let mut worst_d = 0.0f64;
    for &z in grid {
        let e = error_term(pair, z)?;
        let d = derivative_error_term(pair, z)?;
        worst_e = worst_e.max(e.norm() / error_lemma_bound(n, z));
        worst_d = worst_d.max(d.norm() / derivative_lemma_bound(n, z));
    }
    Ok((worst_e, worst_d))
}

/// `max |r_n(z) - e^z| / |z|^{2n+2}` over 16 rays at `|z| ∈ {1e-1, 1e-2, 1e-3}`,
/// one value per radius.
pub fn order_condition_ratios(pair: &PadePair) -> Result<[f64; 3]> {
    let n = pair.order();
    let mut out = [0.0; 3];
    for (slot, r) in out.iter_mut().zip([1e-1, 1e-2, 1e-3]) {
        for k in 0..16 {
            let z = C64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / 16.0);
            let rem = perron_remainder_with(pair, z, &perron_options(), &EvalOptions::default())?;
            *slot = f64::max(*slot, rem.norm() / r.powi(2 * n as i32 + 2));
        }
    }
    Ok(out)
}

/// Random admissible tuples `(u, v, U, V, w)` and the worst relative gap
/// between the closed form and quadrature.
pub fn integrand_lemma_gap(samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u: f64 = rng.random_range(0.2..4.0);
        let v: f64 = rng.random_range(0.2..4.0);
        let big_u: f64 = rng.random_range(0.1..10.0);
        let big_v: f64 = rng.random_range(0.1..10.0);
        let r0 = (big_v / big_u).powf(1.0 / (u + v));
        let w = r0 * rng.random_range(0.0..1.0);
        let exact = integrand_closed_form(u, v, big_u, big_v, w)?;
        let num = integrand_numeric(u, v, big_u, big_v, w, 1e-10)?;
        worst = worst.max((num - exact).abs() / exact.abs());
    }
    Ok(worst)
}

fn check(name: &str, passed: bool, observed: f64, limit: f64, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        observed,
        limit,
        detail,
    }
}

/// Runs every check with the standard Padé pairs.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run_verify_with(cfg, &|n| pade_coefficients(n))
}

/// Runs every check with pairs supplied by `pairs` (used for fault injection).
pub fn run_verify_with(
    cfg: &VerifyConfig,
    pairs: &(dyn Fn(usize) -> Arc<PadePair> + Sync),
) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let slack = 1e-12;

    let grid = log_grid(cfg.axis_t_min, cfg.axis_t_max, cfg.axis_points);
    let stats: Vec<(usize, AxisStats)> = (0..=cfg.n_max)
        .into_par_iter()
        .map(|n| (n, axis_stats(&pairs(n), &grid)))
        .collect();
    let max_r = stats.iter().map(|s| s.1.max_abs_r).fold(0.0, f64::max);
    let min_q = stats.iter().map(|s| s.1.min_abs_q).fold(f64::INFINITY, f64::min);
    let max_ratio = stats.iter().map(|s| s.1.max_q_ratio).fold(0.0, f64::max);
    let max_dr = stats.iter().map(|s| s.1.max_abs_dr).fold(0.0, f64::max);
    let worst_n = stats
        .iter()
        .max_by(|a, b| a.1.max_abs_r.total_cmp(&b.1.max_abs_r))
        .map(|s| s.0)
        .unwrap_or(0);
    report.checks.push(check(
        "a_stability |r_n(it)| <= 1",
        max_r <= 1.0 + slack,
        max_r,
        1.0 + slack,
        format!("max over n <= {} attained at n = {worst_n}", cfg.n_max),
    ));
    report.checks.push(check(
        "boundary |Q_n(it)| >= 1",
        min_q >= 1.0 - slack,
        min_q,
        1.0 - slack,
        format!("{} points per sign", grid.len()),
    ));
    report.checks.push(check(
        "boundary |Q_n'(it)/Q_n(it)| <= 1",
        max_ratio <= 1.0 + slack,
        max_ratio,
        1.0 + slack,
        String::new(),
    ));
    report.checks.push(check(
        "boundary |r_n'(it)| <= 2",
        max_dr <= 2.0 + slack,
        max_dr,
        2.0 + slack,
        String::new(),
    ));

    let disc = disc_grid(10.0, cfg.perron_points);
    let perron: Vec<Result<(f64, usize)>> = (0..=cfg.perron_n_max)
        .into_par_iter()
        .map(|n| perron_discrepancy(&pairs(n), &disc))
        .collect();
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for p in perron {
        let (w, s) = p?;
        worst = worst.max(w);
        skipped += s;
    }
    report.checks.push(check(
        "perron identity",
        worst <= 1e-10,
        worst,
        1e-10,
        format!("n <= {}, {} points, {skipped} skipped at poles", cfg.perron_n_max, disc.len()),
    ));

    let rhp = right_half_plane_grid(cfg.error_radius);
    let ratios: Vec<Result<(f64, f64)>> = (0..=cfg.error_n_max)
        .into_par_iter()
        .map(|n| error_lemma_ratios(&pairs(n), &rhp))
        .collect();
    let (mut we, mut wd) = (0.0f64, 0.0f64);
    for r in ratios {
        let (e, d) = r?;
        we = we.max(e);
        wd = wd.max(d);
    }
    report.checks.push(check(
        "error estimate |r_n(-z) - e^-z|",
        we <= 1.0 + 1e-10,
        we,
        1.0 + 1e-10,
        "worst ratio to bound".into(),
    ));
    report.checks.push(check(
        "error estimate |r_n'(-z) - e^-z|",
        wd <= 1.0 + 1e-10,
        wd,
        1.0 + 1e-10,
        "worst ratio to bound".into(),
    ));

    let order: Vec<Result<[f64; 3]>> = (0..=cfg.perron_n_max)
        .into_par_iter()
        .map(|n| order_condition_ratios(&pairs(n)))
        .collect();
    let mut growth = 0.0f64;
    for o in order {
        let o = o?;
        growth = growth.max(o[2] / o[0]).max(o[1] / o[0]);
    }
    report.checks.push(check(
        "order condition |r_n(z) - e^z| = O(|z|^(2n+2))",
        growth <= 2.0,
        growth,
        2.0,
        "ratio at |z| = 1e-2, 1e-3 relative to |z| = 1e-1".into(),
    ));

    let cases: Vec<(usize, f64)> = (2..=cfg.l2_n_max)
        .flat_map(|n| cfg.l2_alphas.iter().map(move |&a| (n, a)))
        .filter(|&(n, a)| a <= n as f64 + 0.5)
        .collect();
    let l2: Vec<Result<(f64, f64)>> = cases
        .par_iter()
        .map(|&(n, a)| {
            let b = l2_bounds(n, a)?;
            let f = l2_norm_numeric(n, a, NormKind::Function, cfg.l2_tolerance)?;
            let d = l2_norm_numeric(n, a, NormKind::Derivative, cfg.l2_tolerance)?;
            Ok((f / b.l2_bound, d / b.l2_deriv_bound))
        })
        .collect();
    let (mut lf, mut ld) = (0.0f64, 0.0f64);
    for r in l2 {
        let (f, d) = r?;
        lf = lf.max(f);
        ld = ld.max(d);
    }
    report.checks.push(check(
        "L2 estimate ||f_(n,a)(i.)||",
        lf <= 1.0,
        lf,
        1.0,
        format!("{} (n, alpha) pairs, worst ratio to bound", cases.len()),
    ));
    report.checks.push(check(
        "L2 estimate ||d/dt f_(n,a)(i.)||",
        ld <= 1.0,
        ld,
        1.0,
        "worst ratio to bound".into(),
    ));

    let factorial_ok = (0..=cfg.factorial_n_max).all(factorial_estimate_holds);
    report.checks.push(check(
        "factorial estimate n!(n+1)^(n+1) <= (2n+1)!",
        factorial_ok,
        if factorial_ok { 1.0 } else { 0.0 },
        1.0,
        format!("exact for n <= {}", cfg.factorial_n_max),
    ));

    let gap = integrand_lemma_gap(cfg.integrand_samples, cfg.seed)?;
    report.checks.push(check(
        "integrand lemma closed form",
        gap <= 1e-8,
        gap,
        1e-8,
        format!("{} random tuples, seed {}", cfg.integrand_samples, cfg.seed),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = log_grid(1e-3, 1e6, 2000);
        assert_eq!(g.len(), 2000);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[1999] - 1e6).abs() < 1e-6);
        assert_eq!(disc_grid(10.0, 200).len(), 200);
        assert!(right_half_plane_grid(50.0).iter().all(|z| z.re >= 0.0));
    }

    #[test]
    fn small_axis_check() {
        let s = axis_stats(&pade_coefficients(3), &log_grid(1e-3, 1e6, 200));
        assert!(s.within(1e-12), "{s:?}");
    }

    #[test]
    fn perturbed_pair_breaks_a_stability() {
        let bad = pade_coefficients(3).with_perturbed_q(1, -0.1).unwrap();
        let s = axis_stats(&bad, &log_grid(1e-3, 1e6, 200));
        assert!(s.max_abs_r > 1.0 + 1e-12, "{s:?}");
    }

    #[test]
    fn error_lemma_small() {
        let (e, d) = error_lemma_ratios(&pade_coefficients(2), &right_half_plane_grid(5.0)).unwrap();
        assert!(e <= 1.0 + 1e-10 && d <= 1.0 + 1e-10, "{e} {d}");
    }
}
