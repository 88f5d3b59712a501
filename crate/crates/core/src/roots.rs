//! Roots of real polynomials: companion-matrix eigenvalues as starting
//! values, then simultaneous Aberth–Ehrlich refinement in extended precision.

use f256::f256;
use nalgebra::{DMatrix, Schur};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pade::horner_with_derivative;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::precision::{cabs, cabs_f64, f256_to_fixed, fixed_to_f256, from_c64, Real, XComplex, C64};

/// Refinement controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    pub max_iterations: usize,
    /// Relative correction size at which an iterate counts as converged;
    /// iterates whose residuals are at the rounding floor also count.
    pub tolerance: f64,
    /// Extra sweeps after convergence.
    pub polish_sweeps: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-62,
            polish_sweeps: 2,
        }
    }
}

/// Result of a root computation.
#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<XComplex>,
    pub iterations: usize,
    pub max_correction: f64,
}

/// Geometric mean of the root moduli, `|c_0 / c_d|^{1/d}`.
fn root_scale(coeffs: &[f256]) -> f64 {
    let d = coeffs.len() - 1;
    let c0 = coeffs[0].to_f64().abs().ln();
    let cd = coeffs[d].to_f64().abs().ln();
    let s = ((c0 - cd) / d as f64).exp();
    if s.is_finite() && s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Points spread over the circle of radius [`root_scale`].
fn circle_guesses(coeffs: &[f256]) -> Vec<C64> {
    let d = coeffs.len() - 1;
    let s = root_scale(coeffs);
    (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64;
            C64::from_polar(s, theta)
        })
        .collect()
}

/// Starting values from the eigenvalues of the companion matrix of the
/// polynomial in the scaled variable `w = z / s`.
fn initial_guesses(coeffs: &[f256]) -> Vec<C64> {
    let d = coeffs.len() - 1;
    let s = root_scale(coeffs);
    let s_ext = f256::from_f64(s);
    let lead = coeffs[d];
    // monic coefficients in w: c_j s^j / (c_d s^d)
    let mut monic = Vec::with_capacity(d);
    let mut pow = f256::from_f64(1.0);
    let mut pows = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        pows.push(pow);
        pow *= s_ext;
    }
    for j in 0..d {
        monic.push((coeffs[j] * pows[j] / (lead * pows[d])).to_f64());
    }
    let circle = || circle_guesses(coeffs);
    if monic.iter().any(|c| !c.is_finite()) {
        return circle();
    }
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for j in 0..d {
        m[(j, d - 1)] = -monic[j];
    }
    match Schur::try_new(m, f64::EPSILON, 10_000) {
        Some(schur) => {
            let eig = schur.complex_eigenvalues();
            let mut out: Vec<C64> = eig.iter().map(|e| C64::new(e.re * s, e.im * s)).collect();
            // coincident starting values stall Aberth; nudge them apart
            for i in 0..out.len() {
                for j in 0..i {
                    if (out[i] - out[j]).norm() < 1e-10 * s {
                        out[i] += C64::new(0.0, 1e-6 * s * (i as f64 + 1.0));
                    }
                }
            }
            if out.iter().all(|z| z.is_finite()) {
                out
            } else {
                circle()
            }
        }
        None => circle(),
    }
}

/// One Jacobi-style Aberth sweep; returns the new iterates, the largest
/// relative correction and the largest residual relative to `Σ|c_j||z|^j`.
fn aberth_sweep(coeffs: &[f256], z: &[XComplex]) -> (Vec<XComplex>, f64, f64) {
    let one = XComplex::new(f256::from_f64(1.0), f256::from_f64(0.0));
    let updates: Vec<(XComplex, f64, f64)> = (0..z.len())
        .into_par_iter()
        .map(|i| {
            let (p, dp) = horner_with_derivative(coeffs, z[i]);
            if cabs(p) == f256::from_f64(0.0) {
                return (z[i], 0.0, 0.0);
            }
            let residual = (cabs(p) / residual_scale(coeffs, z[i])).to_f64();
            let ratio = p / dp;
            let mut sum = XComplex::new(f256::from_f64(0.0), f256::from_f64(0.0));
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum += one / (z[i] - *zj);
                }
            }
            let w = ratio / (one - ratio * sum);
            let rel = cabs_f64(w) / cabs_f64(z[i]).max(f64::MIN_POSITIVE);
            (z[i] - w, rel, residual)
        })
        .collect();
    let max = updates.iter().fold(0.0f64, |m, u| m.max(u.1));
    let res = updates.iter().fold(0.0f64, |m, u| m.max(u.2));
    (updates.into_iter().map(|u| u.0).collect(), max, res)
}

/// All roots of `Σ c_j z^j` (real coefficients, nonzero leading term),
/// refined to extended precision and sorted by `(Re, Im)`.
pub fn real_polynomial_roots(coeffs: &[f256], opts: &RootOptions) -> Result<RootReport> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(RootReport {
            roots: vec![],
            iterations: 0,
            max_correction: 0.0,
        });
    }
    if d == 1 {
        let root = -coeffs[0] / coeffs[1];
        return Ok(RootReport {
            roots: vec![XComplex::new(root, f256::from_f64(0.0))],
            iterations: 0,
            max_correction: 0.0,
        });
    }
    // companion starts are usually close but occasionally stall; the circle always converges
    let budget = COMPANION_SWEEPS.min(opts.max_iterations);
    let first = aberth(coeffs, initial_guesses(coeffs), budget, opts);
    match first {
        Ok(report) => Ok(report),
        Err(Error::RootConvergenceFailure { iterations: spent, .. }) => {
            let mut report = aberth(coeffs, circle_guesses(coeffs), opts.max_iterations - spent, opts)?;
            report.iterations += spent;
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

/// Sweeps allowed from the companion-matrix start before switching to the circle.
const COMPANION_SWEEPS: usize = 12;

fn aberth(coeffs: &[f256], start: Vec<C64>, max_iterations: usize, opts: &RootOptions) -> Result<RootReport> {
    let d = coeffs.len() - 1;
    let mut z: Vec<XComplex> = start.into_iter().map(from_c64).collect();
    let mut iterations = 0;
    let mut correction = f64::INFINITY;
    // residuals at the rounding level of Horner's rule cannot be improved further
    let floor = 16.0 * (d as f64 + 1.0) * <f256 as Real>::unit_roundoff();
    while iterations < max_iterations {
        let (next, corr, residual) = aberth_sweep(coeffs, &z);
        iterations += 1;
        if corr.is_nan() {
            break;
        }
        let settled = residual <= floor && corr < 1e-20;
        z = next;
        correction = corr;
        if corr < opts.tolerance || settled {
            for _ in 0..opts.polish_sweeps {
                z = aberth_sweep(coeffs, &z).0;
            }
            symmetrize(&mut z);
            sort_roots(&mut z);
            return Ok(RootReport {
                roots: z,
                iterations,
                max_correction: corr,
            });
        }
    }
    Err(Error::RootConvergenceFailure {
        n: d.saturating_sub(1),
        iterations,
        correction,
    })
}

/// Makes the root set exactly closed under conjugation.
pub fn symmetrize(z: &mut [XComplex]) {
    let zero = f256::from_f64(0.0);
    let two = f256::from_f64(2.0);
    let scale = z.iter().map(|w| cabs_f64(*w)).fold(0.0f64, f64::max);
    let mut used = vec![false; z.len()];
    for i in 0..z.len() {
        if used[i] {
            continue;
        }
        if z[i].im.abs().to_f64() <= 1e-40 * scale {
            z[i].im = zero;
            used[i] = true;
            continue;
        }
        let target = z[i].conj();
        let partner = (0..z.len())
            .filter(|&j| j != i && !used[j])
            .min_by(|&a, &b| {
                cabs_f64(z[a] - target)
                    .partial_cmp(&cabs_f64(z[b] - target))
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        if let Some(j) = partner {
            let re = (z[i].re + z[j].re) / two;
            let im = (z[i].im.abs() + z[j].im.abs()) / two;
            let sign = if z[i].im > zero { im } else { -im };
            z[i] = XComplex::new(re, sign);
            z[j] = XComplex::new(re, -sign);
            used[i] = true;
            used[j] = true;
        }
    }
}

/// Lexicographic `(Re, Im)` order.
pub fn sort_roots(z: &mut [XComplex]) {
    z.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Fraction bits of the fixed-point arithmetic used by [`polish_integer_roots`].
pub const FIXED_POINT_BITS: u32 = 768;

/// Complex fixed-point number with [`FIXED_POINT_BITS`] fraction bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComplex {
    pub re: BigInt,
    pub im: BigInt,
}

impl FixedComplex {
    pub fn from_ext(z: XComplex) -> Self {
        Self {
            re: f256_to_fixed(z.re, FIXED_POINT_BITS),
            im: f256_to_fixed(z.im, FIXED_POINT_BITS),
        }
    }

    pub fn to_ext(&self) -> XComplex {
        XComplex::new(
            fixed_to_f256(&self.re, FIXED_POINT_BITS),
            fixed_to_f256(&self.im, FIXED_POINT_BITS),
        )
    }

    fn mul(&self, other: &Self) -> Self {
        let k = FIXED_POINT_BITS as usize;
        Self {
            re: (&self.re * &other.re - &self.im * &other.im) >> k,
            im: (&self.re * &other.im + &self.im * &other.re) >> k,
        }
    }
}

/// Value and derivative of an integer-coefficient polynomial at a
/// fixed-point argument; only the final shifts round.
pub fn eval_integer_poly(coeffs: &[BigInt], z: &FixedComplex) -> (FixedComplex, FixedComplex) {
    let k = FIXED_POINT_BITS as usize;
    let zero = || FixedComplex {
        re: BigInt::zero(),
        im: BigInt::zero(),
    };
    let mut value = zero();
    let mut deriv = zero();
    for c in coeffs.iter().rev() {
        let d = deriv.mul(z);
        deriv = FixedComplex {
            re: d.re + &value.re,
            im: d.im + &value.im,
        };
        let v = value.mul(z);
        value = FixedComplex {
            re: v.re + (c << k),
            im: v.im,
        };
    }
    (value, deriv)
}

/// Newton polishing of approximate roots against an exactly represented
/// integer-coefficient polynomial. Removes the error that rounding the
/// coefficients to `f256` puts into ill-conditioned roots.
pub fn polish_integer_roots(coeffs: &[BigInt], roots: &[XComplex], steps: usize) -> Vec<XComplex> {
    roots
        .par_iter()
        .map(|r| {
            let mut z = FixedComplex::from_ext(*r);
            for _ in 0..steps {
                let (v, d) = eval_integer_poly(coeffs, &z);
                let d = d.to_ext();
                if cabs(d) == f256::from_f64(0.0) {
                    break;
                }
                let step = FixedComplex::from_ext(v.to_ext() / d);
                z = FixedComplex {
                    re: z.re - step.re,
                    im: z.im - step.im,
                };
            }
            z.to_ext()
        })
        .collect()
}

/// `Σ |c_j| |z|^j`, the natural scale for a residual at `z`.
pub fn residual_scale(coeffs: &[f256], z: XComplex) -> f256 {
    let r = cabs(z);
    let mut acc = f256::from_f64(0.0);
    for c in coeffs.iter().rev() {
        acc = acc * r + c.abs();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(v: &[f64]) -> Vec<f256> {
        v.iter().map(|&x| f256::from_f64(x)).collect()
    }

    #[test]
    fn quadratic() {
        // 6 - 4z + z^2 has roots 2 ± i√2
        let r = real_polynomial_roots(&ext(&[6.0, -4.0, 1.0]), &RootOptions::default()).unwrap();
        assert_eq!(r.roots.len(), 2);
        let a = crate::precision::to_c64(r.roots[0]);
        let b = crate::precision::to_c64(r.roots[1]);
        assert!((a - C64::new(2.0, -2f64.sqrt())).norm() < 1e-15);
        assert!((b - C64::new(2.0, 2f64.sqrt())).norm() < 1e-15);
        assert_eq!(r.roots[0], r.roots[1].conj());
    }

    #[test]
    fn integer_roots_to_extended_accuracy() {
        // (z-1)(z-2)(z-3)(z-4)
        let c = ext(&[24.0, -50.0, 35.0, -10.0, 1.0]);
        let r = real_polynomial_roots(&c, &RootOptions::default()).unwrap();
        for (k, root) in r.roots.iter().enumerate() {
            let err = *root - XComplex::new(f256::from_f64(k as f64 + 1.0), f256::from_f64(0.0));
            assert!(cabs_f64(err) < 1e-60);
        }
    }

    #[test]
    fn stall_is_reported() {
        let opts = RootOptions {
            max_iterations: 1,
            ..RootOptions::default()
        };
        let c = ext(&[24.0, -50.0, 35.0, -10.0, 1.0]);
        assert!(matches!(
            real_polynomial_roots(&c, &opts),
            Err(Error::RootConvergenceFailure { .. })
        ));
    }
}
