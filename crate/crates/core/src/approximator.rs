//! `r_n(-tA)x` from the partial-fraction form, the convergence bounds it
//! satisfies, and empirical convergence studies.

use std::fmt::Write as _;

use f256::f256;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::c_alpha;
use crate::error::{domain, Error, Result};
use crate::operators::{norm, Generator};
use crate::partial_fractions::{partial_fraction_form, PartialFractionForm};
use crate::precision::{from_c64, to_c64, Real, XComplex, C64};

/// `r_n(-tA)x = Σ_j (b_j/t) (λ_j/t + A)^{-1} x`, with `r_n(0)x = x` at `t = 0`.
///
/// Solves run in parallel in extended precision; the sum is taken in pole order.
pub fn apply_rn(pf: &PartialFractionForm, t: f64, gen: &dyn Generator, x: &[C64]) -> Result<Vec<C64>> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    if x.len() != gen.dimension() {
        return domain(format!("vector has length {}, generator dimension is {}", x.len(), gen.dimension()));
    }
    if t == 0.0 {
        return Ok(x.to_vec());
    }
    let tx = f256::from_f64(t);
    let xe: Vec<XComplex> = x.iter().map(|&v| from_c64(v)).collect();
    let terms: Vec<Result<Vec<XComplex>>> = pf
        .poles_ext
        .par_iter()
        .zip(&pf.residues_ext)
        .map(|(l, b)| {
            let y = gen.resolvent_solve_extended(*l / tx, &xe)?;
            let w = *b / tx;
            Ok(y.into_iter().map(|v| w * v).collect())
        })
        .collect();
    let zero = f256::from_f64(0.0);
    let mut acc = vec![XComplex::new(zero, zero); x.len()];
    for term in terms {
        for (a, v) in acc.iter_mut().zip(term?) {
            *a += v;
        }
    }
    Ok(acc.into_iter().map(to_c64).collect())
}

/// `‖r_n(-tA)x - e^{-tA}x‖`.
pub fn approximation_error(pf: &PartialFractionForm, t: f64, gen: &dyn Generator, x: &[C64]) -> Result<f64> {
    let approx = apply_rn(pf, t, gen, x)?;
    let exact = gen.exp_oracle(t, x)?;
    let diff: Vec<C64> = approx.iter().zip(&exact).map(|(a, b)| a - b).collect();
    Ok(norm(&diff))
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    Ok(())
}

/// `C(α) M t^α (n+1)^{-α+1/2} ‖A^α x‖` for uniformly bounded semigroups.
pub fn bound_uniform(alpha: f64, m: f64, t: f64, n: usize, norm_a_alpha_x: f64) -> Result<f64> {
    check_time(t)?;
    if !(m >= 1.0) {
        return domain(format!("uniform bound needs M >= 1, got {m}"));
    }
    if !(alpha > 0.5) || (n as f64) < alpha - 0.5 {
        return domain(format!("uniform bound needs alpha > 1/2 and n >= alpha - 1/2 (alpha = {alpha}, n = {n})"));
    }
    Ok(uniform_formula(alpha, m, t, n)? * norm_a_alpha_x)
}

fn uniform_formula(alpha: f64, m: f64, t: f64, n: usize) -> Result<f64> {
    Ok(c_alpha(alpha)? * m * t.powf(alpha) * (n as f64 + 1.0).powf(-alpha + 0.5))
}

/// `4 M_ν / (απ) t^α (n+1)^{-α} ‖A^α x‖` for bounded analytic semigroups.
pub fn bound_analytic(alpha: f64, m_nu: f64, t: f64, n: usize, norm_a_alpha_x: f64) -> Result<f64> {
    check_time(t)?;
    if !(m_nu > 0.0) {
        return domain(format!("M_nu must be positive, got {m_nu}"));
    }
    if !(alpha > 0.0) || (n as f64) < alpha - 1.0 {
        return domain(format!("analytic bound needs alpha > 0 and n >= alpha - 1 (alpha = {alpha}, n = {n})"));
    }
    Ok(analytic_formula(alpha, m_nu, t, n) * norm_a_alpha_x)
}

fn analytic_formula(alpha: f64, m_nu: f64, t: f64, n: usize) -> f64 {
    4.0 * m_nu / (alpha * std::f64::consts::PI) * t.powf(alpha) * (n as f64 + 1.0).powf(-alpha)
}

/// `M/√(4πω) · 4/√(2α-1) · t^{α-1/2} (n+1)^{-α+1/2} ‖A^α x‖` for exponentially stable semigroups.
pub fn bound_exp_stable(alpha: f64, m: f64, omega: f64, t: f64, n: usize, norm_a_alpha_x: f64) -> Result<f64> {
    check_time(t)?;
    if !(m > 0.0 && omega > 0.0) {
        return domain(format!("exp-stable bound needs M > 0 and omega > 0 (M = {m}, omega = {omega})"));
    }
    if !(alpha > 0.5) || (n as f64) < alpha - 0.5 {
        return domain(format!("exp-stable bound needs alpha > 1/2 and n >= alpha - 1/2 (alpha = {alpha}, n = {n})"));
    }
    Ok(exp_stable_formula(alpha, m, omega, t, n) * norm_a_alpha_x)
}

fn exp_stable_formula(alpha: f64, m: f64, omega: f64, t: f64, n: usize) -> f64 {
    m / (4.0 * std::f64::consts::PI * omega).sqrt() * 4.0 / (2.0 * alpha - 1.0).sqrt()
        * t.powf(alpha - 0.5)
        * (n as f64 + 1.0).powf(-alpha + 0.5)
}

/// `2 C t^α (n+1)^{-α} ‖A^α x‖` for generators with a bounded `H^∞` calculus.
pub fn bound_hinfty(alpha: f64, c_hinf: f64, t: f64, n: usize, norm_a_alpha_x: f64) -> Result<f64> {
    check_time(t)?;
    if !(c_hinf > 0.0) {
        return domain(format!("H-infinity constant must be positive, got {c_hinf}"));
    }
    if !(alpha > 0.0) || (n as f64) <= alpha / 2.0 - 1.0 {
        return domain(format!("H-infinity bound needs alpha > 0 and n > alpha/2 - 1 (alpha = {alpha}, n = {n})"));
    }
    Ok(hinfty_formula(alpha, c_hinf, t, n) * norm_a_alpha_x)
}

fn hinfty_formula(alpha: f64, c: f64, t: f64, n: usize) -> f64 {
    2.0 * c * t.powf(alpha) * (n as f64 + 1.0).powf(-alpha)
}

/// `c t^a (n+1)^{-a} ‖A^α x‖` for exponentially γ-stable semigroups.
///
/// The theorem's constant is not explicit, so `c_user` is supplied by the
/// caller and the result only has the proven shape.
pub fn bound_gamma_stable(alpha: f64, a: f64, t: f64, n: usize, norm_a_alpha_x: f64, c_user: f64) -> Result<f64> {
    check_time(t)?;
    if !(c_user > 0.0) {
        return domain(format!("gamma-stable constant must be positive, got {c_user}"));
    }
    if !(a > 0.0 && a < alpha) || (n as f64) <= a / 2.0 - 1.0 {
        return domain(format!("gamma-stable bound needs 0 < a < alpha and n > a/2 - 1 (a = {a}, alpha = {alpha}, n = {n})"));
    }
    Ok(gamma_formula(a, c_user, t, n) * norm_a_alpha_x)
}

fn gamma_formula(a: f64, c: f64, t: f64, n: usize) -> f64 {
    c * t.powf(a) * (n as f64 + 1.0).powf(-a)
}

/// Which theorem supplies the bound, with its constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum StudyRegime {
    Uniform { alpha: f64, m: f64 },
    Analytic { alpha: f64, m_nu: f64 },
    ExpStable { alpha: f64, m: f64, omega: f64 },
    HInfinity { alpha: f64, c: f64 },
    GammaStableHilbert { alpha: f64, a: f64, c_user: f64 },
}

impl StudyRegime {
    pub fn alpha(&self) -> f64 {
        match *self {
            StudyRegime::Uniform { alpha, .. }
            | StudyRegime::Analytic { alpha, .. }
            | StudyRegime::ExpStable { alpha, .. }
            | StudyRegime::HInfinity { alpha, .. }
            | StudyRegime::GammaStableHilbert { alpha, .. } => alpha,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            StudyRegime::Uniform { .. } => "uniform",
            StudyRegime::Analytic { .. } => "analytic",
            StudyRegime::ExpStable { .. } => "exp_stable",
            StudyRegime::HInfinity { .. } => "h_infinity",
            StudyRegime::GammaStableHilbert { .. } => "gamma_stable_hilbert",
        }
    }

    /// The bound at `(t, n)`, or a domain error if the theorem does not apply.
    pub fn bound(&self, t: f64, n: usize, norm_a_alpha_x: f64) -> Result<f64> {
        match *self {
            StudyRegime::Uniform { alpha, m } => bound_uniform(alpha, m, t, n, norm_a_alpha_x),
            StudyRegime::Analytic { alpha, m_nu } => bound_analytic(alpha, m_nu, t, n, norm_a_alpha_x),
            StudyRegime::ExpStable { alpha, m, omega } => bound_exp_stable(alpha, m, omega, t, n, norm_a_alpha_x),
            StudyRegime::HInfinity { alpha, c } => bound_hinfty(alpha, c, t, n, norm_a_alpha_x),
            StudyRegime::GammaStableHilbert { alpha, a, c_user } => {
                bound_gamma_stable(alpha, a, t, n, norm_a_alpha_x, c_user)
            }
        }
    }

    /// Evaluates the bound formula even outside the theorem's hypotheses.
    /// The flag is `false` when the hypotheses fail.
    pub fn bound_forced(&self, t: f64, n: usize, norm_a_alpha_x: f64) -> Result<(f64, bool)> {
        match self.bound(t, n, norm_a_alpha_x) {
            Ok(b) => Ok((b, true)),
            Err(Error::Domain(_)) => {
                check_time(t)?;
                let raw = match *self {
                    StudyRegime::Uniform { alpha, m } => uniform_formula(alpha, m, t, n)?,
                    StudyRegime::Analytic { alpha, m_nu } => analytic_formula(alpha, m_nu, t, n),
                    StudyRegime::ExpStable { alpha, m, omega } => exp_stable_formula(alpha, m, omega, t, n),
                    StudyRegime::HInfinity { alpha, c } => hinfty_formula(alpha, c, t, n),
                    StudyRegime::GammaStableHilbert { a, c_user, .. } => gamma_formula(a, c_user, t, n),
                };
                Ok((raw * norm_a_alpha_x, false))
            }
            Err(e) => Err(e),
        }
    }
}

/// One `(n, t)` measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub t: f64,
    pub alpha: f64,
    pub regime: String,
    pub empirical_error: f64,
    pub bound: f64,
    /// The theorem's hypotheses hold for this `n`.
    pub valid: bool,
    pub norm_a_alpha_x: f64,
}

/// Records of a convergence study with a least-squares rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub records: Vec<ConvergenceRecord>,
    /// Slope of `log(error)` against `log(n+1)`.
    pub fitted_slope: f64,
    /// Smallest and largest `n` used in the fit.
    pub slope_window: (usize, usize),
    pub fit_points: usize,
}

/// Errors below this are treated as noise and excluded from the slope fit.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Minimum number of usable points for a slope fit.
pub const MIN_FIT_POINTS: usize = 5;

/// `‖A^α x‖`, using integer powers of `A` when fractional powers are unavailable.
pub fn norm_a_alpha(gen: &dyn Generator, alpha: f64, x: &[C64]) -> Result<f64> {
    match gen.fractional_power_apply(alpha, x) {
        Ok(y) => Ok(norm(&y)),
        Err(Error::Unsupported(msg)) => {
            if alpha.fract() != 0.0 || alpha < 0.0 {
                return Err(Error::Unsupported(msg));
            }
            let mut y = x.to_vec();
            for _ in 0..alpha as usize {
                y = gen.apply(&y)?;
            }
            Ok(norm(&y))
        }
        Err(e) => Err(e),
    }
}

/// Least-squares slope of `(ln(n+1), ln err)` over points with `err ≥ NOISE_FLOOR`.
pub fn fit_slope(points: &[(usize, f64)]) -> Result<(f64, (usize, usize), usize)> {
    let used: Vec<(usize, f64)> = points
        .iter()
        .copied()
        .filter(|&(_, e)| e >= NOISE_FLOOR && e.is_finite())
        .collect();
    if used.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            usable: used.len(),
            required: MIN_FIT_POINTS,
        });
    }
    let xs: Vec<f64> = used.iter().map(|&(n, _)| (n as f64 + 1.0).ln()).collect();
    let ys: Vec<f64> = used.iter().map(|&(_, e)| e.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let lo = used.iter().map(|p| p.0).min().unwrap_or(0);
    let hi = used.iter().map(|p| p.0).max().unwrap_or(0);
    if sxx == 0.0 {
        return Err(Error::InsufficientData {
            usable: 1,
            required: MIN_FIT_POINTS,
        });
    }
    Ok((sxy / sxx, (lo, hi), used.len()))
}

/// Measures `‖r_n(-tA)x - T(t)x‖` for every `n` and fits the decay rate.
///
/// `n_values` must be ascending and satisfy the regime's hypotheses.
pub fn convergence_study(
    gen: &dyn Generator,
    x: &[C64],
    t: f64,
    n_values: &[usize],
    regime: &StudyRegime,
) -> Result<StudyResult> {
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return domain("n values must be strictly ascending");
    }
    let alpha = regime.alpha();
    let nax = norm_a_alpha(gen, alpha, x)?;
    for &n in n_values {
        regime.bound(t, n, nax)?;
    }
    let exact = gen.exp_oracle(t, x)?;
    let records: Vec<Result<ConvergenceRecord>> = n_values
        .par_iter()
        .map(|&n| {
            let pf = partial_fraction_form(n)?;
            let approx = apply_rn(&pf, t, gen, x)?;
            let diff: Vec<C64> = approx.iter().zip(&exact).map(|(a, b)| a - b).collect();
            Ok(ConvergenceRecord {
                n,
                t,
                alpha,
                regime: regime.tag().to_string(),
                empirical_error: norm(&diff),
                bound: regime.bound(t, n, nax)?,
                valid: true,
                norm_a_alpha_x: nax,
            })
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    let points: Vec<(usize, f64)> = records.iter().map(|r| (r.n, r.empirical_error)).collect();
    let (fitted_slope, slope_window, fit_points) = fit_slope(&points)?;
    Ok(StudyResult {
        records,
        fitted_slope,
        slope_window,
        fit_points,
    })
}

/// Column order of [`study_csv`].
pub const CSV_HEADER: &str = "n,t,alpha,regime,empirical_error,bound,valid";

/// CSV rendering with a versioned header comment.
pub fn study_csv(study: &StudyResult) -> String {
    let mut s = String::from("# subpade-study v1\n");
    let _ = writeln!(
        s,
        "# fitted_slope={} window={}..{} points={}",
        study.fitted_slope, study.slope_window.0, study.slope_window.1, study.fit_points
    );
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &study.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{:e},{:e},{}",
            r.n, r.t, r.alpha, r.regime, r.empirical_error, r.bound, r.valid
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::DiagonalGenerator;
    use crate::pade::eval_rn;

    fn one(v: f64) -> Vec<C64> {
        vec![C64::new(v, 0.0)]
    }

    #[test]
    fn hand_value_n1() {
        let g = DiagonalGenerator::new(one(1.0)).unwrap();
        let pf = partial_fraction_form(1).unwrap();
        let y = apply_rn(&pf, 1.0, &g, &one(1.0)).unwrap();
        assert!((y[0] - 4.0 / 11.0).norm() < 1e-15);
        assert_eq!(apply_rn(&pf, 0.0, &g, &one(2.5)).unwrap(), one(2.5));
    }

    #[test]
    fn scalar_reduction() {
        let g = DiagonalGenerator::new(vec![C64::new(0.0, 10.0)]).unwrap();
        let pf = partial_fraction_form(2).unwrap();
        let e = approximation_error(&pf, 1.0, &g, &[C64::new(2.0, 0.0)]).unwrap();
        let z = C64::new(0.0, -10.0);
        let expected = 2.0 * (eval_rn(2, z).unwrap() - z.exp()).norm();
        assert!((e - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn zero_generator_is_exact() {
        let g = DiagonalGenerator::new(vec![C64::new(0.0, 0.0); 2]).unwrap();
        for n in [0, 5, 40] {
            let pf = partial_fraction_form(n).unwrap();
            let e = approximation_error(&pf, 3.0, &g, &[C64::new(1.0, 1.0); 2]).unwrap();
            assert!(e < 1e-14, "n = {n}: {e}");
        }
    }

    #[test]
    fn bound_examples() {
        let u = bound_uniform(1.0, 1.0, 1.0, 8, 1.0).unwrap();
        assert!(u <= 4.10 / 3.0);
        assert!((bound_uniform(1.0, 1.0, 2.0, 8, 1.0).unwrap() / u - 2.0).abs() < 1e-14);
        assert_eq!(bound_uniform(1.0, 1.0, 0.0, 8, 1.0).unwrap(), 0.0);
        assert!(bound_uniform(2.0, 1.0, 1.0, 1, 1.0).is_err());
        let a = bound_analytic(1.0, 1.0, 1.0, 9, 1.0).unwrap();
        assert!((a - 4.0 / (10.0 * std::f64::consts::PI)).abs() < 1e-15);
        let e = bound_exp_stable(1.0, 1.0, 1.0, 1.0, 3, 1.0).unwrap();
        assert!((e - 4.0 / (4.0 * std::f64::consts::PI).sqrt() * 0.5).abs() < 1e-15);
        assert!(bound_exp_stable(1.0, 1.0, 2.0, 1.0, 3, 1.0).unwrap() < e);
        assert!((bound_hinfty(1.0, 1.0, 1.0, 4, 1.0).unwrap() - 0.4).abs() < 1e-15);
        assert!(bound_hinfty(3.0, 1.0, 1.0, 1, 1.0).is_ok());
        assert!(bound_hinfty(4.0, 1.0, 1.0, 1, 1.0).is_err());
        assert!(bound_gamma_stable(1.0, 1.0, 1.0, 3, 1.0, 1.0).is_err());
        let g1 = bound_gamma_stable(2.0, 0.5, 1.0, 3, 1.0, 1.0).unwrap();
        let g2 = bound_gamma_stable(2.0, 1.0, 1.0, 3, 1.0, 1.0).unwrap();
        assert!(g2 < g1);
    }

    #[test]
    fn forced_bound_is_flagged() {
        let r = StudyRegime::Uniform { alpha: 3.0, m: 1.0 };
        let (b, valid) = r.bound_forced(1.0, 1, 1.0).unwrap();
        assert!(!valid && b > 0.0);
        assert!(r.bound_forced(1.0, 3, 1.0).unwrap().1);
    }

    #[test]
    fn study_on_zero_generator_has_no_data() {
        let g = DiagonalGenerator::new(vec![C64::new(0.0, 0.0)]).unwrap();
        let r = convergence_study(&g, &one(1.0), 1.0, &[2, 3, 4, 5, 6], &StudyRegime::HInfinity { alpha: 1.0, c: 1.0 });
        assert!(matches!(r, Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(usize, f64)> = (2..12).map(|n| (n, 3.0 * (n as f64 + 1.0).powf(-1.5))).collect();
        let (s, w, k) = fit_slope(&pts).unwrap();
        assert!((s + 1.5).abs() < 1e-12);
        assert_eq!((w, k), ((2, 11), 10));
    }
}
