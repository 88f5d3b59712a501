//! Generators `-A` presented through `x ↦ Ax` and shifted resolvent solves.
//!
//! The sign convention matches the approximation formula: a backend declares
//! `A` (spectrum in the closed right half-plane) and `r_n(-tA)x` is assembled
//! from solves with `μ + A`, `Re μ > 0`.

mod dense;
mod diagonal;
mod text;

pub use dense::DenseMatrixGenerator;
pub use diagonal::DiagonalGenerator;
pub use text::{parse_matrix, parse_vector, read_matrix, read_vector, write_matrix, write_vector};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::precision::{XComplex, C64};

/// Growth class of the semigroup with its user-declared constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// `‖T(t)‖ ≤ M`.
    UniformlyBounded { m: f64 },
    /// `A` sectorial with `M_ν = sup_{λ ∈ ∂Σ_ν} ‖λ R(λ, A)‖`.
    Analytic { m_nu: f64, nu: f64 },
    /// `‖T(t)‖ ≤ M e^{-ωt}`.
    ExpStable { m: f64, omega: f64 },
    /// Contraction semigroup on a Hilbert space.
    HilbertContraction,
}

impl Regime {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::UniformlyBounded { m } if !(m >= 1.0 && m.is_finite()) => {
                domain(format!("uniform bound M must be a finite number >= 1, got {m}"))
            }
            Regime::Analytic { m_nu, nu } => {
                if !(m_nu > 0.0 && m_nu.is_finite()) {
                    return domain(format!("M_nu must be positive, got {m_nu}"));
                }
                if !(nu > 0.0 && nu < std::f64::consts::FRAC_PI_2) {
                    return domain(format!("nu must lie in (0, pi/2), got {nu}"));
                }
                Ok(())
            }
            Regime::ExpStable { m, omega } if !(m > 0.0 && omega > 0.0 && m.is_finite() && omega.is_finite()) => {
                domain(format!("exp-stable constants must be positive, got M = {m}, omega = {omega}"))
            }
            _ => Ok(()),
        }
    }
}

/// A generator `-A` on `C^d`.
///
/// Implementations must allow concurrent `resolvent_solve` calls.
pub trait Generator: Send + Sync {
    fn dimension(&self) -> usize;

    /// `Ax`.
    fn apply(&self, x: &[C64]) -> Result<Vec<C64>>;

    /// The solution `y` of `(μ + A) y = x`.
    fn resolvent_solve(&self, mu: C64, x: &[C64]) -> Result<Vec<C64>>;

    /// [`Generator::resolvent_solve`] in extended precision.
    fn resolvent_solve_extended(&self, mu: XComplex, x: &[XComplex]) -> Result<Vec<XComplex>>;

    /// `e^{-tA}x` computed without Padé approximation.
    fn exp_oracle(&self, t: f64, x: &[C64]) -> Result<Vec<C64>>;

    /// Declared regimes.
    fn regimes(&self) -> &[Regime];

    /// `A^α x` for the principal branch.
    fn fractional_power_apply(&self, _alpha: f64, _x: &[C64]) -> Result<Vec<C64>> {
        Err(Error::Unsupported("fractional powers are only available for diagonal generators".into()))
    }
}

/// Euclidean norm.
pub fn norm(x: &[C64]) -> f64 {
    let scale = x.iter().map(|v| v.re.abs().max(v.im.abs())).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * x.iter().map(|v| (v / scale).norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ conj(x_k) y_k`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn check_dimension(expected: usize, x: &[C64]) -> Result<()> {
    if x.len() != expected {
        return domain(format!("vector has length {}, generator dimension is {expected}", x.len()));
    }
    Ok(())
}

pub(crate) fn check_shift(mu: C64) -> Result<()> {
    if !(mu.re > 0.0) {
        return domain(format!("resolvent shift must have positive real part, got {mu}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        assert_eq!(norm(&[]), 0.0);
        assert_eq!(norm(&[C64::new(0.0, 0.0)]), 0.0);
        assert_eq!(norm(&[C64::new(3.0, 0.0), C64::new(0.0, 4.0)]), 5.0);
        assert_eq!(norm(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]), 1.0);
        assert!((norm(&[C64::new(1e200, 0.0); 4]) - 2e200).abs() < 1e186);
    }

    #[test]
    fn regime_validation() {
        assert!(Regime::Analytic { m_nu: 1.0, nu: 1.6 }.validate().is_err());
        assert!(Regime::Analytic { m_nu: 1.0, nu: 1.5 }.validate().is_ok());
        assert!(Regime::UniformlyBounded { m: 0.5 }.validate().is_err());
        assert!(Regime::ExpStable { m: 1.0, omega: 0.0 }.validate().is_err());
    }
}
