//! Closed-form constants and error bounds, with quadrature oracles for the
//! `L^2` norms they control.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::pade::{error_term, error_terms, pade_coefficients, principal_pow, PadePair};
use crate::precision::C64;
use crate::quadrature::{integrate, integrate_panels, QuadratureOptions};

/// `ln(n!)` by direct summation.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln(n! / (2n+1)!)`.
fn ln_factorial_ratio(n: usize) -> f64 {
    -((n + 1)..=(2 * n + 1)).map(|k| (k as f64).ln()).sum::<f64>()
}

/// The constant `C(α)` of the uniformly bounded convergence theorem.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.5) || !alpha.is_finite() {
        return domain(format!("C(alpha) requires alpha > 1/2, got {alpha}"));
    }
    Ok(2f64.sqrt() / (2.0 * alpha - 1.0).powf(0.25) * deriv_factor(alpha).sqrt())
}

/// `8α/(2α+1)^{3/2} + (13/10)^α √(5^{2α}/(6·13^{2α}) + 360/(13(2α-1)))`.
fn deriv_factor(alpha: f64) -> f64 {
    let inner = (5.0f64 / 13.0).powf(2.0 * alpha) / 6.0 + 360.0 / (13.0 * (2.0 * alpha - 1.0));
    8.0 * alpha / (2.0 * alpha + 1.0).powf(1.5) + 1.3f64.powf(alpha) * inner.sqrt()
}

/// `2 (n!/(2n+1)!)^{α/(n+1)}`, the supremum bound for `f_{n,α}` on the right half-plane.
pub fn sup_bound(n: usize, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0 * n as f64 + 2.0) {
        return domain(format!("sup_bound requires 0 < alpha < {}, got {alpha}", 2 * n + 2));
    }
    Ok(2.0 * (alpha / (n as f64 + 1.0) * ln_factorial_ratio(n)).exp())
}

/// `L^2` bounds for `f_{n,α}(i·)` and its derivative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub alpha: f64,
    pub c_alpha: f64,
    pub l2_bound: f64,
    pub l2_deriv_bound: f64,
}

fn check_l2_window(n: usize, alpha: f64) -> Result<()> {
    if !(alpha > 0.5 && alpha <= n as f64 + 0.5) {
        return domain(format!("L2 estimates require 1/2 < alpha <= {}, got {alpha}", n as f64 + 0.5));
    }
    Ok(())
}

pub fn l2_bounds(n: usize, alpha: f64) -> Result<BoundConstants> {
    check_l2_window(n, alpha)?;
    let decay = (n as f64 + 1.0).powf(-alpha + 0.5);
    Ok(BoundConstants {
        alpha,
        c_alpha: c_alpha(alpha)?,
        l2_bound: 4.0 / (2.0 * alpha - 1.0).sqrt() * decay,
        l2_deriv_bound: deriv_factor(alpha) * decay,
    })
}

/// `½ (n!/(2n+1)!)² |z|^{2n+2}`.
pub fn error_lemma_bound(n: usize, z: C64) -> f64 {
    let r = z.norm();
    if r == 0.0 {
        return 0.0;
    }
    (2.0 * ln_factorial_ratio(n) + (2.0 * n as f64 + 2.0) * r.ln()).exp() * 0.5
}

/// `(n!/(2n+1)!)² (4/5 |z|^{2n+2} + (n+1)|z|^{2n+1})`.
pub fn derivative_lemma_bound(n: usize, z: C64) -> f64 {
    let r = z.norm();
    if r == 0.0 {
        return 0.0;
    }
    let base = (2.0 * ln_factorial_ratio(n) + (2.0 * n as f64 + 1.0) * r.ln()).exp();
    base * (0.8 * r + n as f64 + 1.0)
}

/// Which `L^2` norm to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Function,
    Derivative,
}

fn squared_integrand(pair: &PadePair, alpha: f64, t: f64, which: NormKind) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let z = C64::new(0.0, t);
    match which {
        NormKind::Function => Ok((error_term(pair, z)? / principal_pow(z, alpha)).norm_sqr()),
        NormKind::Derivative => {
            let (e, d) = error_terms(pair, z)?;
            let g = d / principal_pow(z, alpha);
            let h = e / principal_pow(z, alpha + 1.0);
            Ok((g + h * alpha).norm_sqr())
        }
    }
}

/// `‖f_{n,α}(i·)‖_{L²(ℝ)}` (or the norm of its `t`-derivative) by panel quadrature.
///
/// The integrand is even in `t`, so `[0, ∞)` is integrated and doubled. Far
/// out, `|r_n(-it)| ≲ (n+1)/t`, so the integrand equals `t^{-2α}` up to
/// `O(t^{-1-2α})` after averaging the oscillation; the panels stop once that
/// remainder is below a quarter of the tolerance and `∫_T^∞ t^{-2α}` is added.
pub fn l2_norm_numeric(n: usize, alpha: f64, which: NormKind, rel_tol: f64) -> Result<f64> {
    check_l2_window(n, alpha)?;
    let pair = pade_coefficients(n);
    let rho = n as f64 + 1.0;
    let remainder_coeff = 3.0 * rho + rho * rho + 2.0 * alpha + alpha * alpha;
    let t_min = 8.0 * rho * rho;
    let mut f = |t: f64| squared_integrand(&pair, alpha, t, which);

    let head_breaks = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let opts = QuadratureOptions::default().with_rel_tol(rel_tol * 1e-2);
    let mut total: f64 = integrate_panels(&head_breaks, &mut f, &opts)?;
    let panel: f64 = 8.0;
    let mut a: f64 = 8.0;
    loop {
        let tail_err = remainder_coeff * a.powf(-1.0 - 2.0 * alpha);
        if a >= t_min && tail_err <= 0.25 * rel_tol * total {
            break;
        }
        if a > 1e9 {
            return Err(Error::ConvergenceFailure(format!(
                "L2 tail for n = {n}, alpha = {alpha} did not settle"
            )));
        }
        let opts = QuadratureOptions {
            abs_tol: 1e-3 * rel_tol * total.max(f64::MIN_POSITIVE) * panel / a.max(1.0),
            ..opts
        };
        total += integrate(a, a + panel, &mut f, &opts)?;
        a += panel;
    }
    total += a.powf(1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0);
    Ok((2.0 * total).sqrt())
}

/// `V (U/V)^{v/(u+v)} (u+v)/(uv) - (U/u) w^u`, valid for `0 <= w <= (V/U)^{1/(u+v)}`.
pub fn integrand_closed_form(u: f64, v: f64, big_u: f64, big_v: f64, w: f64) -> Result<f64> {
    check_integrand_args(u, v, big_u, big_v, w)?;
    Ok(big_v * (big_u / big_v).powf(v / (u + v)) * (u + v) / (u * v) - big_u / u * w.powf(u))
}

fn check_integrand_args(u: f64, v: f64, big_u: f64, big_v: f64, w: f64) -> Result<()> {
    if !(u > 0.0 && v > 0.0 && big_u > 0.0 && big_v > 0.0) {
        return domain("u, v, U, V must be positive");
    }
    let r0 = (big_v / big_u).powf(1.0 / (u + v));
    if !(w >= 0.0 && w <= r0) {
        return domain(format!("w = {w} must lie in [0, {r0}]"));
    }
    Ok(())
}

/// `∫_w^∞ min{U r^u, V r^{-v}} dr/r` by quadrature in `x = ln r`, split at the kink.
pub fn integrand_numeric(u: f64, v: f64, big_u: f64, big_v: f64, w: f64, rel_tol: f64) -> Result<f64> {
    check_integrand_args(u, v, big_u, big_v, w)?;
    let x0 = (big_v / big_u).ln() / (u + v);
    // beyond these points each branch is below 1e-18 of the peak
    let cut = 18.0 * std::f64::consts::LN_10;
    let lo = if w > 0.0 { w.ln() } else { x0 - cut / u };
    let hi = x0 + cut / v;
    let f = |x: f64| Ok((big_u * (u * x).exp()).min(big_v * (-v * x).exp()));
    let opts = QuadratureOptions::default()
        .with_rel_tol(rel_tol * 1e-2)
        .with_initial_nodes(32);
    let mut breaks = vec![];
    let pieces = 16;
    for k in 0..=pieces {
        breaks.push(lo + (x0 - lo) * k as f64 / pieces as f64);
    }
    for k in 1..=pieces {
        breaks.push(x0 + (hi - x0) * k as f64 / pieces as f64);
    }
    if lo >= x0 {
        breaks = (0..=pieces)
            .map(|k| x0 + (hi - x0) * k as f64 / pieces as f64)
            .collect();
    }
    integrate_panels(&breaks, f, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        assert!(c_alpha(1.0).unwrap() <= 4.10);
        assert!(c_alpha(2.0).unwrap() <= 2.76);
        assert!(c_alpha(3.0).unwrap() <= 2.41);
        assert!(c_alpha(4.0).unwrap() <= 2.28);
        assert!(c_alpha(0.5).is_err());
        assert!(c_alpha(0.5 + 1e-12).unwrap() > 100.0);
    }

    #[test]
    fn sup_bound_values() {
        assert!((sup_bound(0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((sup_bound(5, 1e-300).unwrap() - 2.0).abs() < 1e-15);
        for n in 0..30 {
            for alpha in [0.3, 1.0, 2.5] {
                if alpha < 2.0 * n as f64 + 2.0 {
                    let b = sup_bound(n, alpha).unwrap();
                    assert!(b <= 2.0 * (n as f64 + 1.0).powf(-alpha) * (1.0 + 1e-12));
                }
            }
        }
        assert!(sup_bound(1, 4.0).is_err());
    }

    #[test]
    fn l2_bound_window() {
        let b = l2_bounds(10, 1.0).unwrap();
        assert!((b.l2_bound - 4.0 / 11f64.sqrt()).abs() < 1e-15);
        assert!(l2_bounds(3, 3.5).is_ok());
        assert!(l2_bounds(3, 3.5001).is_err());
        assert!(l2_bounds(3, 0.5).is_err());
        assert!(l2_bounds(4, 1.0).unwrap().l2_bound < l2_bounds(3, 1.0).unwrap().l2_bound);
    }

    #[test]
    fn integrand_lemma_example() {
        let exact = integrand_closed_form(1.0, 2.0, 1.0, 1.0, 0.0).unwrap();
        assert!((exact - 1.5).abs() < 1e-15);
        let num = integrand_numeric(1.0, 2.0, 1.0, 1.0, 0.0, 1e-10).unwrap();
        assert!((num - exact).abs() < 1e-9);
        let num = integrand_numeric(0.7, 0.3, 2.0, 5.0, 0.4, 1e-10).unwrap();
        let exact = integrand_closed_form(0.7, 0.3, 2.0, 5.0, 0.4).unwrap();
        assert!((num - exact).abs() < 1e-9 * exact);
        assert!(integrand_closed_form(1.0, 1.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn l2_numeric_below_bound_small_case() {
        let b = l2_bounds(2, 1.0).unwrap();
        let f = l2_norm_numeric(2, 1.0, NormKind::Function, 1e-8).unwrap();
        let d = l2_norm_numeric(2, 1.0, NormKind::Derivative, 1e-8).unwrap();
        assert!(f <= b.l2_bound, "{f} vs {}", b.l2_bound);
        assert!(d <= b.l2_deriv_bound, "{d} vs {}", b.l2_deriv_bound);
    }
}
