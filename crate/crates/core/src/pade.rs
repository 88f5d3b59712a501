//! Subdiagonal Padé approximants `r_n = P_n / Q_n` of the exponential.
//!
//! Coefficients are exact big rationals; they are rounded only when a
//! polynomial is evaluated in a given [`Precision`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use f256::f256;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::precision::{cabs_f64, from_c64, to_c64, Precision, Real, C64};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::roots::{real_polynomial_roots, RootOptions};

/// Polynomial with exact rational coefficients; `coeffs[j]` multiplies `z^j`.
#[derive(Clone)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
    rounded_f64: OnceLock<Vec<f64>>,
    rounded_ext: OnceLock<Vec<f256>>,
}

impl RationalPolynomial {
    /// Builds a polynomial, rejecting an empty list or a zero leading coefficient.
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        match coeffs.last() {
            None => domain("polynomial needs at least one coefficient"),
            Some(c) if c.is_zero() && coeffs.len() > 1 => {
                domain("leading coefficient must be nonzero")
            }
            _ => Ok(Self {
                coeffs,
                rounded_f64: OnceLock::new(),
                rounded_ext: OnceLock::new(),
            }),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn derivative(&self) -> RationalPolynomial {
        if self.coeffs.len() == 1 {
            return RationalPolynomial::new(vec![BigRational::zero()]).expect("constant");
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
            .collect();
        RationalPolynomial::new(coeffs).expect("derivative of nonconstant polynomial")
    }

    /// Coefficients rounded to the precision `R`.
    pub fn rounded<R: Real + RoundedCache>(&self) -> &[R] {
        R::cached(self)
    }

    /// Horner evaluation in the requested precision.
    pub fn eval(&self, z: C64, precision: Precision) -> C64 {
        match precision {
            Precision::Double => horner(self.rounded::<f64>(), z),
            Precision::Extended => to_c64(horner(self.rounded::<f256>(), from_c64(z))),
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_coefficient(&self) -> f64 {
        self.rounded::<f64>()
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.coeffs.iter().map(|c| c.to_string()))
            .finish()
    }
}

impl PartialEq for RationalPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

/// Per-precision storage of rounded coefficients.
pub trait RoundedCache: Sized {
    fn cached(poly: &RationalPolynomial) -> &[Self];
}

impl RoundedCache for f64 {
    fn cached(poly: &RationalPolynomial) -> &[f64] {
        poly.rounded_f64
            .get_or_init(|| poly.coeffs.iter().map(<f64 as Real>::from_rational).collect())
    }
}

impl RoundedCache for f256 {
    fn cached(poly: &RationalPolynomial) -> &[f256] {
        poly.rounded_ext
            .get_or_init(|| poly.coeffs.iter().map(<f256 as Real>::from_rational).collect())
    }
}

/// Plain Horner evaluation of a real-coefficient polynomial.
pub fn horner<R: Real>(coeffs: &[R], z: Complex<R>) -> Complex<R> {
    let mut acc = Complex::new(R::zero(), R::zero());
    for c in coeffs.iter().rev() {
        acc = acc * z;
        acc.re = acc.re + *c;
    }
    acc
}

/// Horner evaluation of value and first derivative.
pub fn horner_with_derivative<R: Real>(coeffs: &[R], z: Complex<R>) -> (Complex<R>, Complex<R>) {
    let mut value = Complex::new(R::zero(), R::zero());
    let mut deriv = Complex::new(R::zero(), R::zero());
    for c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z;
        value.re = value.re + *c;
    }
    (value, deriv)
}

/// The pair `(P_n, Q_n)` with `deg P_n = n`, `deg Q_n = n + 1`, `P_n(0) = Q_n(0) = 1`.
#[derive(Clone, Debug)]
pub struct PadePair {
    n: usize,
    p: RationalPolynomial,
    q: RationalPolynomial,
    dp: RationalPolynomial,
    dq: RationalPolynomial,
    factored: OnceLock<Option<Arc<FactoredForm>>>,
}

impl PadePair {
    /// Assembles a pair after checking the degree and normalization invariants.
    ///
    /// Used directly only for fault-injection experiments; the approximants
    /// themselves come from [`pade_coefficients`].
    pub fn from_polynomials(n: usize, p: RationalPolynomial, q: RationalPolynomial) -> Result<Self> {
        if p.degree() != n || q.degree() != n + 1 {
            return domain(format!(
                "expected degrees ({n}, {}), got ({}, {})",
                n + 1,
                p.degree(),
                q.degree()
            ));
        }
        if !p.coeffs[0].is_one() || !q.coeffs[0].is_one() {
            return domain("P_n(0) and Q_n(0) must both equal 1");
        }
        let dp = p.derivative();
        let dq = q.derivative();
        Ok(Self {
            n,
            p,
            q,
            dp,
            dq,
            factored: OnceLock::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &RationalPolynomial {
        &self.p
    }

    pub fn q(&self) -> &RationalPolynomial {
        &self.q
    }

    pub fn dp(&self) -> &RationalPolynomial {
        &self.dp
    }

    pub fn dq(&self) -> &RationalPolynomial {
        &self.dq
    }

    /// Returns a copy with the `z^j` coefficient of `Q_n` multiplied by `1 + rel`.
    pub fn with_perturbed_q(&self, j: usize, rel: f64) -> Result<Self> {
        if j == 0 || j > self.n + 1 {
            return domain("perturbed coefficient index must be in 1..=n+1");
        }
        let factor = BigRational::from_float(1.0 + rel)
            .ok_or_else(|| Error::Domain("non-finite perturbation".into()))?;
        let mut coeffs = self.q.coeffs.clone();
        coeffs[j] = &coeffs[j] * factor;
        Self::from_polynomials(self.n, self.p.clone(), RationalPolynomial::new(coeffs)?)
    }

    /// Root factorization of `P_n` and `Q_n`, computed on first use.
    /// `None` if root refinement failed, in which case callers fall back to Horner.
    pub fn factored(&self) -> Option<&FactoredForm> {
        self.factored
            .get_or_init(|| FactoredForm::new(self).ok().map(Arc::new))
            .as_deref()
    }

    /// `Q_n(z)` in the working precision `R`.
    pub fn q_at<R: Real + RoundedCache>(&self, z: Complex<R>) -> Complex<R> {
        horner(self.q.rounded::<R>(), z)
    }

    /// Evaluates `P, P', Q, Q'` at `z` in precision `R`.
    pub fn values<R: Real + RoundedCache>(&self, z: Complex<R>) -> PadeValues<R> {
        let (p, dp) = horner_with_derivative(self.p.rounded::<R>(), z);
        let (q, dq) = horner_with_derivative(self.q.rounded::<R>(), z);
        PadeValues { p, dp, q, dq }
    }
}

/// `P, P', Q, Q'` at a single point.
#[derive(Clone, Copy, Debug)]
pub struct PadeValues<R> {
    pub p: Complex<R>,
    pub dp: Complex<R>,
    pub q: Complex<R>,
    pub dq: Complex<R>,
}

impl<R: Real> PadeValues<R> {
    pub fn r(&self) -> Complex<R> {
        self.p / self.q
    }

    /// `r_n'(z) = (P'Q - PQ') / Q^2`.
    pub fn dr(&self) -> Complex<R> {
        (self.dp * self.q - self.p * self.dq) / (self.q * self.q)
    }
}

fn factorials(up_to: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(BigInt::one());
    for k in 1..=up_to {
        let next = &out[k - 1] * BigInt::from(k);
        out.push(next);
    }
    out
}

fn build_pair(n: usize) -> PadePair {
    let f = factorials(2 * n + 2);
    let denom_common = &f[2 * n + 1];
    let p = (0..=n)
        .map(|j| {
            BigRational::new(
                &f[2 * n + 1 - j] * &f[n],
                denom_common * &f[j] * &f[n - j],
            )
        })
        .collect();
    let q = (0..=n + 1)
        .map(|j| {
            let mag = BigRational::new(
                &f[2 * n + 1 - j] * &f[n + 1],
                denom_common * &f[j] * &f[n + 1 - j],
            );
            if j % 2 == 1 {
                -mag
            } else {
                mag
            }
        })
        .collect();
    PadePair::from_polynomials(
        n,
        RationalPolynomial::new(p).expect("nonzero leading coefficient"),
        RationalPolynomial::new(q).expect("nonzero leading coefficient"),
    )
    .expect("factorial formula satisfies the Padé invariants")
}

/// The `n`-th subdiagonal Padé pair, computed exactly from the factorial
/// formulas and cached for the life of the process.
pub fn pade_coefficients(n: usize) -> Arc<PadePair> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PadePair>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(pair) = cache.lock().expect("pade cache poisoned").get(&n) {
        return pair.clone();
    }
    let pair = Arc::new(build_pair(n));
    cache
        .lock()
        .expect("pade cache poisoned")
        .entry(n)
        .or_insert(pair)
        .clone()
}

/// Horner evaluation of an exact polynomial in the requested precision.
pub fn eval_poly(poly: &RationalPolynomial, z: C64, precision: Precision) -> C64 {
    poly.eval(z, precision)
}

/// Evaluation controls for `r_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    pub precision: Precision,
    /// `PoleProximity` is raised when `|Q_n(z)| < pole_threshold * max_j |q_j|`.
    pub pole_threshold: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            precision: Precision::Extended,
            pole_threshold: 1e-13,
        }
    }
}

fn check_pole(pair: &PadePair, z: C64, q_abs: f64, opts: &EvalOptions) -> Result<()> {
    let threshold = opts.pole_threshold * pair.q.max_coefficient();
    if q_abs < threshold {
        return Err(Error::PoleProximity {
            z: format!("{z}"),
            magnitude: q_abs,
            threshold,
        });
    }
    Ok(())
}

/// Double-precision values of `r_n`, `r_n'` and `|Q_n|`; for `|z| > 1` the
/// reversed polynomials are used so that nothing overflows.
fn values_f64(pair: &PadePair, z: C64) -> (C64, C64, f64) {
    let n = pair.n as f64;
    if z.norm() <= 1.0 {
        let v = pair.values::<f64>(z);
        return (v.r(), v.dr(), v.q.norm());
    }
    let w = z.inv();
    let prev: Vec<f64> = pair.p.rounded::<f64>().iter().rev().copied().collect();
    let qrev: Vec<f64> = pair.q.rounded::<f64>().iter().rev().copied().collect();
    let (pt, dpt) = horner_with_derivative(&prev, w);
    let (qt, dqt) = horner_with_derivative(&qrev, w);
    let r = w * pt / qt;
    // P'/Q = (n w^2 P~ - w^3 P~') / Q~,  Q'/Q = w ((n+1) - w Q~'/Q~)
    let dp_over_q = (w * w * n * pt - w * w * w * dpt) / qt;
    let dq_over_q = w * ((n + 1.0) - w * dqt / qt);
    let dr = dp_over_q - r * dq_over_q;
    let q_abs = qt.norm() * z.norm().powi(pair.n as i32 + 1);
    (r, dr, q_abs)
}

/// `r_n(z)` and `r_n'(z)` with the given options.
pub fn eval_rn_with(pair: &PadePair, z: C64, opts: &EvalOptions) -> Result<(C64, C64)> {
    match opts.precision {
        Precision::Double => {
            let (r, dr, q_abs) = values_f64(pair, z);
            check_pole(pair, z, q_abs, opts)?;
            Ok((r, dr))
        }
        Precision::Extended => {
            let v = pair.values::<f256>(from_c64(z));
            check_pole(pair, z, cabs_f64(v.q), opts)?;
            Ok((to_c64(v.r()), to_c64(v.dr())))
        }
    }
}

/// `r_n(z) = P_n(z) / Q_n(z)` in extended precision, rounded to `f64`.
pub fn eval_rn(n: usize, z: C64) -> Result<C64> {
    eval_rn_with(&pade_coefficients(n), z, &EvalOptions::default()).map(|(r, _)| r)
}

/// `r_n'(z)` in extended precision, rounded to `f64`.
pub fn eval_rn_derivative(n: usize, z: C64) -> Result<C64> {
    eval_rn_with(&pade_coefficients(n), z, &EvalOptions::default()).map(|(_, dr)| dr)
}

/// `r_n = (p_n/q_{n+1}) Π(z - ζ_j) / Π(z - λ_j)` with the roots of `P_n`
/// and `Q_n` rounded to double precision.
///
/// Unlike Horner's rule on the monomial coefficients, the product is
/// accurate to a few ulps per factor wherever `z` is not close to a root.
#[derive(Clone, Debug)]
pub struct FactoredForm {
    lead_ratio: f64,
    zeros: Vec<C64>,
    poles: Vec<C64>,
    zero_abs: Vec<f64>,
    pole_abs: Vec<f64>,
    q_lead: f64,
}

impl FactoredForm {
    fn new(pair: &PadePair) -> Result<Self> {
        // only the f64 roundings are kept
        let opts = RootOptions {
            tolerance: 1e-24,
            polish_sweeps: 1,
            ..RootOptions::default()
        };
        let zeros = real_polynomial_roots(pair.p.rounded::<f256>(), &opts)?.roots;
        let poles = real_polynomial_roots(pair.q.rounded::<f256>(), &opts)?.roots;
        let lead = &pair.p.coeffs[pair.n] / &pair.q.coeffs[pair.n + 1];
        let zeros: Vec<C64> = zeros.into_iter().map(to_c64).collect();
        let poles: Vec<C64> = poles.into_iter().map(to_c64).collect();
        Ok(Self {
            lead_ratio: <f64 as Real>::from_rational(&lead),
            zero_abs: zeros.iter().map(|z| z.norm()).collect(),
            pole_abs: poles.iter().map(|z| z.norm()).collect(),
            zeros,
            poles,
            q_lead: <f64 as Real>::from_rational(&pair.q.coeffs[pair.n + 1]).abs(),
        })
    }

    pub fn eval(&self, z: C64) -> FactoredValues {
        let mut r = C64::new(self.lead_ratio, 0.0);
        // |Q| as mantissa * 2^exp so that large |z| cannot overflow
        let mut q_mant = self.q_lead;
        let mut q_exp = 0i32;
        let mut q_ratio = C64::new(0.0, 0.0);
        let mut p_ratio = C64::new(0.0, 0.0);
        let mut err = 0.0;
        for (k, (pole, pole_abs)) in self.poles.iter().zip(&self.pole_abs).enumerate() {
            let dz = z - pole;
            let dz_abs = dz.norm_sqr().sqrt();
            q_mant *= dz_abs;
            if !(1e-150..=1e150).contains(&q_mant) {
                let (m, e) = frexp(q_mant);
                q_mant = m;
                q_exp += e;
            }
            err += pole_abs / dz_abs + 2.0;
            q_ratio += dz.inv();
            r /= dz;
            if let (Some(zero), Some(zero_abs)) = (self.zeros.get(k), self.zero_abs.get(k)) {
                let dw = z - zero;
                err += zero_abs / dw.norm_sqr().sqrt() + 2.0;
                p_ratio += dw.inv();
                r *= dw;
            }
        }
        FactoredValues {
            r,
            dr: r * (p_ratio - q_ratio),
            q_abs: q_mant * 2f64.powi(q_exp),
            q_ratio,
            rel_err: err * f64::EPSILON,
        }
    }
}

/// `x = m 2^e` with `0.5 <= |m| < 1` for finite nonzero `x`.
fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let e = x.abs().log2().floor() as i32 + 1;
    (x * 2f64.powi(-e), e)
}

/// Values produced by [`FactoredForm::eval`].
#[derive(Clone, Copy, Debug)]
pub struct FactoredValues {
    pub r: C64,
    pub dr: C64,
    pub q_abs: f64,
    /// `Q_n'(z) / Q_n(z)`.
    pub q_ratio: C64,
    /// Running estimate of the relative rounding error.
    pub rel_err: f64,
}

impl FactoredValues {
    fn usable(&self) -> bool {
        self.rel_err <= 1e-13 && self.r.is_finite() && self.dr.is_finite() && self.q_ratio.is_finite()
    }
}

/// `r_n` and `r_n'` accurate to about `1e-13` relative: the factored form
/// when its error estimate certifies it, extended-precision Horner otherwise.
pub(crate) fn rn_fast(pair: &PadePair, z: C64) -> (C64, C64) {
    let v = fast_values(pair, z);
    (v.r, v.dr)
}

/// [`FactoredValues`] at `z`, from the factored form when it is accurate
/// there and from extended-precision Horner otherwise.
pub fn fast_values(pair: &PadePair, z: C64) -> FactoredValues {
    if let Some(f) = pair.factored() {
        let v = f.eval(z);
        if v.usable() {
            return v;
        }
    }
    let v = pair.values::<f256>(from_c64(z));
    FactoredValues {
        r: to_c64(v.r()),
        dr: to_c64(v.dr()),
        q_abs: cabs_f64(v.q),
        q_ratio: to_c64(v.dq / v.q),
        rel_err: 1e-60,
    }
}

/// `z^{2n+2} / (2n+1)!` as a running product.
fn power_over_factorial(n: usize, z: C64) -> C64 {
    let mut acc = z;
    for k in 1..=(2 * n + 1) {
        acc *= z / k as f64;
    }
    acc
}

/// `∫_0^1 s^a (1-s)^b e^{(1-s) w} ds` by doubling Gauss–Legendre.
pub fn perron_integral(a: usize, b: usize, w: C64, opts: &QuadratureOptions) -> Result<C64> {
    let (a, b) = (a as f64, b as f64);
    integrate(
        0.0,
        1.0,
        |s: f64| {
            if s <= 0.0 || s >= 1.0 {
                return Ok(C64::new(0.0, 0.0));
            }
            let log_weight = a * s.ln() + b * (1.0 - s).ln();
            Ok((w * (1.0 - s) + log_weight).exp())
        },
        opts,
    )
}

/// Default quadrature controls for the Perron representation.
pub fn perron_options() -> QuadratureOptions {
    QuadratureOptions::default().with_rel_tol(1e-10)
}

/// `r_n(z) - e^z` through Perron's integral representation.
pub fn perron_remainder(n: usize, z: C64, quad_points: usize) -> Result<C64> {
    let opts = perron_options().with_initial_nodes(quad_points);
    perron_remainder_with(&pade_coefficients(n), z, &opts, &EvalOptions::default())
}

/// As [`perron_remainder`], for an explicit pair and explicit controls.
pub fn perron_remainder_with(
    pair: &PadePair,
    z: C64,
    quad: &QuadratureOptions,
    eval: &EvalOptions,
) -> Result<C64> {
    let n = pair.n;
    if z == C64::new(0.0, 0.0) {
        return Ok(C64::new(0.0, 0.0));
    }
    let q = to_c64(pair.q_at::<f256>(from_c64(z)));
    check_pole(pair, z, q.norm(), eval)?;
    let scale = power_over_factorial(n, z);
    if !scale.is_finite() {
        return domain(format!("|z|^(2n+2)/(2n+1)! overflows for n = {n}, z = {z}"));
    }
    let integral = perron_integral(n, n + 1, z, quad)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(scale * integral * sign / q)
}

fn check_closed_right_half_plane(z: C64) -> Result<()> {
    if z.re < 0.0 || !z.is_finite() {
        return domain(format!("z = {z} must lie in the closed right half-plane"));
    }
    if z == C64::new(0.0, 0.0) {
        return domain("z = 0 is excluded");
    }
    Ok(())
}

/// `E_n(z) = r_n(-z) - e^{-z}` for `z` in the closed right half-plane.
///
/// Direct subtraction is used when it does not cancel; near the origin,
/// where the difference is `O(|z|^{2n+2})`, the Perron form is used instead.
pub fn error_term(pair: &PadePair, z: C64) -> Result<C64> {
    check_closed_right_half_plane(z)?;
    let (r, _) = rn_fast(pair, -z);
    value_error(pair, z, r, (-z).exp())
}

/// `D_n(z) = r_n'(-z) - e^{-z}` for `z` in the closed right half-plane.
///
/// The cancellation-free route splits the derivative of the Perron form as
/// `D = -(Q'(-z)/Q(-z) + (2n+2)/z) E + T_3` with
/// `T_3 = (-1)^n Q(-z)^{-1} z^{2n+2}/(2n+1)! ∫ s^n (1-s)^{n+2} e^{-(1-s) z} ds`.
pub fn derivative_error_term(pair: &PadePair, z: C64) -> Result<C64> {
    check_closed_right_half_plane(z)?;
    let (_, dr) = rn_fast(pair, -z);
    derivative_error(pair, z, dr, (-z).exp())
}

/// [`error_term`] and [`derivative_error_term`] from one evaluation of `r_n`.
pub fn error_terms(pair: &PadePair, z: C64) -> Result<(C64, C64)> {
    check_closed_right_half_plane(z)?;
    let (r, dr) = rn_fast(pair, -z);
    let e = (-z).exp();
    Ok((value_error(pair, z, r, e)?, derivative_error(pair, z, dr, e)?))
}

fn value_error(pair: &PadePair, z: C64, r: C64, e: C64) -> Result<C64> {
    let direct = r - e;
    if direct.norm() >= 1e-3 * r.norm().max(e.norm()) {
        return Ok(direct);
    }
    perron_remainder_with(pair, -z, &perron_options(), &EvalOptions::default())
}

fn derivative_error(pair: &PadePair, z: C64, dr: C64, e: C64) -> Result<C64> {
    let direct = dr - e;
    if direct.norm() >= 1e-3 * dr.norm().max(e.norm()) {
        return Ok(direct);
    }
    let n = pair.n;
    let v = pair.values::<f256>(from_c64(-z));
    let q = to_c64(v.q);
    let q_ratio = to_c64(v.dq / v.q);
    let err = perron_remainder_with(pair, -z, &perron_options(), &EvalOptions::default())?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let t3 = power_over_factorial(n, -z) * perron_integral(n, n + 2, -z, &perron_options())? * sign
        / q;
    Ok(-(q_ratio + (2.0 * n as f64 + 2.0) / z) * err + t3)
}

/// `f_{n,α}(z) = (r_n(-z) - e^{-z}) / z^α` with the principal branch of `z^α`.
pub fn modified_error(n: usize, alpha: f64, z: C64) -> Result<C64> {
    let pair = pade_coefficients(n);
    check_alpha_for_modified_error(n, alpha)?;
    let e = error_term(&pair, z)?;
    Ok(e / principal_pow(z, alpha))
}

pub(crate) fn check_alpha_for_modified_error(n: usize, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0 * n as f64 + 2.0) {
        return domain(format!("alpha = {alpha} must lie in (0, {})", 2 * n + 2));
    }
    Ok(())
}

/// `z^α = exp(α Log z)` with the branch cut on the negative real axis.
pub fn principal_pow(z: C64, alpha: f64) -> C64 {
    if z == C64::new(0.0, 0.0) {
        return C64::new(0.0, 0.0);
    }
    (z.ln() * alpha).exp()
}

/// Exact comparison `n! (n+1)^{n+1} <= (2n+1)!` in big integers.
pub fn factorial_estimate_holds(n: usize) -> bool {
    let f = factorials(2 * n + 1);
    let lhs = &f[n] * BigInt::from(n + 1).pow(n as u32 + 1);
    lhs <= f[2 * n + 1]
}

/// Exact `(n! / (2n+1)!)` as a rational.
pub fn factorial_ratio(n: usize) -> BigRational {
    let f = factorials(2 * n + 1);
    BigRational::new(f[n].clone(), f[2 * n + 1].clone())
}

/// Checks whether a rational is strictly positive (used by exactness tests).
pub fn is_positive(r: &BigRational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn order_zero_and_one() {
        let p0 = pade_coefficients(0);
        assert_eq!(p0.p().coeffs(), &[rat(1, 1)]);
        assert_eq!(p0.q().coeffs(), &[rat(1, 1), rat(-1, 1)]);
        let p1 = pade_coefficients(1);
        assert_eq!(p1.p().coeffs(), &[rat(1, 1), rat(1, 3)]);
        assert_eq!(p1.q().coeffs(), &[rat(1, 1), rat(-2, 3), rat(1, 6)]);
    }

    #[test]
    fn q1_vanishes_at_its_roots() {
        let q1 = pade_coefficients(1);
        let root = C64::new(2.0, 2f64.sqrt());
        assert!(eval_poly(q1.q(), root, Precision::Extended).norm() < 1e-15);
        assert_eq!(eval_poly(q1.q(), C64::new(0.0, 0.0), Precision::Double), C64::new(1.0, 0.0));
        assert_eq!(eval_poly(pade_coefficients(0).p(), C64::new(3.0, -7.0), Precision::Double), C64::new(1.0, 0.0));
    }

    #[test]
    fn r0_is_one_over_one_minus_z() {
        let r = eval_rn(0, C64::new(-1.0, 0.0)).unwrap();
        assert!((r - 0.5).norm() < 1e-16);
        for n in 0..10 {
            assert_eq!(eval_rn(n, C64::new(0.0, 0.0)).unwrap(), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn pole_is_reported() {
        let err = eval_rn(0, C64::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::PoleProximity { .. }));
        let err = eval_rn(1, C64::new(2.0, 2f64.sqrt())).unwrap_err();
        assert!(matches!(err, Error::PoleProximity { .. }));
    }

    #[test]
    fn double_and_extended_agree_where_well_conditioned() {
        let pair = pade_coefficients(6);
        for z in [C64::new(-3.0, 0.5), C64::new(0.3, -0.2), C64::new(-40.0, 12.0)] {
            let opts = EvalOptions {
                precision: Precision::Double,
                ..EvalOptions::default()
            };
            let (a, da) = eval_rn_with(&pair, z, &opts).unwrap();
            let (b, db) = eval_rn_with(&pair, z, &EvalOptions::default()).unwrap();
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300), "{z}");
            assert!((da - db).norm() <= 1e-12 * db.norm().max(1e-300), "{z}");
        }
    }

    #[test]
    fn perron_matches_direct_subtraction() {
        let direct = eval_rn(1, C64::new(-1.0, 0.0)).unwrap() - (-1.0f64).exp();
        let perron = perron_remainder(1, C64::new(-1.0, 0.0), 16).unwrap();
        assert!((perron - direct).norm() <= 1e-12 * direct.norm());

        let z = C64::new(0.0, 2.0);
        let direct = eval_rn(3, z).unwrap() - z.exp();
        let perron = perron_remainder(3, z, 16).unwrap();
        assert!((perron - direct).norm() <= 1e-10 * direct.norm());
        assert_eq!(perron_remainder(4, C64::new(0.0, 0.0), 16).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn modified_error_matches_composition() {
        let expected = eval_rn(1, C64::new(-1.0, 0.0)).unwrap() - (-1.0f64).exp();
        let got = modified_error(1, 1.0, C64::new(1.0, 0.0)).unwrap();
        assert!((got - expected).norm() <= 1e-12 * expected.norm());
    }

    #[test]
    fn modified_error_domain() {
        assert!(matches!(modified_error(2, 1.0, C64::new(-0.1, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(modified_error(2, 1.0, C64::new(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(modified_error(2, 6.0, C64::new(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_error_routes_agree() {
        // at |z| = 4 both routes are usable for n = 2; compare them
        let pair = pade_coefficients(2);
        let z = C64::new(1.0, 3.0);
        let (_, dr) = eval_rn_with(&pair, -z, &EvalOptions::default()).unwrap();
        let direct = dr - (-z).exp();
        let n = 2usize;
        let v = pair.values::<f256>(from_c64(-z));
        let err = perron_remainder_with(&pair, -z, &perron_options(), &EvalOptions::default()).unwrap();
        let t3 = power_over_factorial(n, -z) * perron_integral(n, n + 2, -z, &perron_options()).unwrap()
            / to_c64(v.q);
        let split = -(to_c64(v.dq / v.q) + 6.0 / z) * err + t3;
        assert!((split - direct).norm() <= 1e-9 * direct.norm(), "{split} vs {direct}");
    }

    #[test]
    fn factorial_estimate_small_cases() {
        for n in 0..20 {
            assert!(factorial_estimate_holds(n));
        }
        assert_eq!(factorial_ratio(1), rat(1, 6));
    }
}
