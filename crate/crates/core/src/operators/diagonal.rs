use f256::f256;

use super::{check_dimension, check_shift, Generator, Regime};
use crate::error::{domain, Error, Result};
use crate::pade::principal_pow;
use crate::precision::{cabs_f64, from_c64, Real, XComplex, C64};

/// `A = diag(μ_k)` with `Re μ_k ≥ 0`, so `-A` generates a contraction semigroup.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalGenerator {
    eigenvalues: Vec<C64>,
    eigenvalues_ext: Vec<XComplex>,
    regimes: Vec<Regime>,
}

impl DiagonalGenerator {
    pub fn new(eigenvalues: Vec<C64>) -> Result<Self> {
        if let Some(mu) = eigenvalues.iter().find(|m| !(m.re >= 0.0) || !m.im.is_finite() || !m.re.is_finite()) {
            return domain(format!("diagonal generator needs Re mu_k >= 0, got {mu}"));
        }
        let eigenvalues_ext = eigenvalues.iter().map(|&m| from_c64(m)).collect();
        Ok(Self {
            eigenvalues,
            eigenvalues_ext,
            regimes: vec![Regime::UniformlyBounded { m: 1.0 }, Regime::HilbertContraction],
        })
    }

    /// Real eigenvalues log-spaced in `[lo, hi]`.
    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo) || count == 0 {
            return domain("log-spaced spectrum needs 0 < lo <= hi and count >= 1");
        }
        let eig = crate::verify::log_grid(lo, hi, count)
            .into_iter()
            .map(|v| C64::new(v, 0.0))
            .collect();
        Self::new(eig)
    }

    /// Adds a declared regime after validating its constants.
    pub fn with_regime(mut self, regime: Regime) -> Result<Self> {
        regime.validate()?;
        if let Regime::Analytic { nu, .. } = regime {
            if self.eigenvalues.iter().any(|m| m.norm() > 0.0 && m.arg().abs() >= nu) {
                return domain(format!("spectrum is not contained in the sector of angle {nu}"));
            }
        }
        self.regimes.push(regime);
        Ok(self)
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    /// `M_ν = sup_{λ ∈ ∂Σ_ν} max_k |λ / (λ - μ_k)|`, evaluated in closed form.
    ///
    /// On the ray `arg λ = ±ν` the supremum for one eigenvalue is
    /// `1/sin(δ)` when the angle `δ` between ray and eigenvalue is below
    /// `π/2`, and `1` (approached at infinity) otherwise.
    pub fn sectoriality_constant(&self, nu: f64) -> Result<f64> {
        if !(nu > 0.0 && nu < std::f64::consts::PI) {
            return domain(format!("nu must lie in (0, pi), got {nu}"));
        }
        let mut m: f64 = 1.0;
        for mu in &self.eigenvalues {
            if mu.norm() == 0.0 {
                continue;
            }
            let theta = mu.arg();
            if theta.abs() >= nu {
                return domain(format!("eigenvalue {mu} lies outside the sector of angle {nu}"));
            }
            for delta in [nu - theta, nu + theta] {
                if delta < std::f64::consts::FRAC_PI_2 {
                    m = m.max(1.0 / delta.sin());
                }
            }
        }
        Ok(m)
    }
}

impl Generator for DiagonalGenerator {
    fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_dimension(self.dimension(), x)?;
        Ok(self.eigenvalues.iter().zip(x).map(|(m, v)| m * v).collect())
    }

    fn resolvent_solve(&self, mu: C64, x: &[C64]) -> Result<Vec<C64>> {
        check_dimension(self.dimension(), x)?;
        check_shift(mu)?;
        Ok(self.eigenvalues.iter().zip(x).map(|(m, v)| v / (mu + m)).collect())
    }

    fn resolvent_solve_extended(&self, mu: XComplex, x: &[XComplex]) -> Result<Vec<XComplex>> {
        if x.len() != self.dimension() {
            return domain(format!("vector has length {}, generator dimension is {}", x.len(), self.dimension()));
        }
        if !(mu.re > f256::from_f64(0.0)) {
            return domain("resolvent shift must have positive real part");
        }
        let mut out = Vec::with_capacity(x.len());
        for (m, v) in self.eigenvalues_ext.iter().zip(x) {
            let d = mu + m;
            if cabs_f64(d) == 0.0 {
                return Err(Error::SingularShift {
                    mu: format!("{}", crate::precision::to_c64(mu)),
                });
            }
            out.push(v / d);
        }
        Ok(out)
    }

    fn exp_oracle(&self, t: f64, x: &[C64]) -> Result<Vec<C64>> {
        check_dimension(self.dimension(), x)?;
        if !(t >= 0.0) {
            return domain(format!("time must be non-negative, got {t}"));
        }
        Ok(self.eigenvalues.iter().zip(x).map(|(m, v)| (-t * m).exp() * v).collect())
    }

    fn regimes(&self) -> &[Regime] {
        &self.regimes
    }

    fn fractional_power_apply(&self, alpha: f64, x: &[C64]) -> Result<Vec<C64>> {
        check_dimension(self.dimension(), x)?;
        if !(alpha > 0.0) {
            return domain(format!("fractional power needs alpha > 0, got {alpha}"));
        }
        Ok(self
            .eigenvalues
            .iter()
            .zip(x)
            .map(|(m, v)| if m.norm() == 0.0 { C64::new(0.0, 0.0) } else { principal_pow(*m, alpha) * v })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn resolvent_examples() {
        let g = DiagonalGenerator::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let y = g.resolvent_solve(c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((y[0] - 0.5).norm() < 1e-16 && (y[1] - 1.0 / 3.0).norm() < 1e-16);
        assert!(g.resolvent_solve(c(0.0, 1.0), &[c(1.0, 0.0); 2]).is_err());
        assert!(DiagonalGenerator::new(vec![c(-1.0, 0.0)]).is_err());
    }

    #[test]
    fn fractional_powers() {
        let g = DiagonalGenerator::new(vec![c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let y = g.fractional_power_apply(2.0, &[c(1.0, 0.0); 2]).unwrap();
        assert!((y[0] - 4.0).norm() < 1e-14 && (y[1] - 9.0).norm() < 1e-14);
        let g = DiagonalGenerator::new(vec![c(0.0, 1.0)]).unwrap();
        let y = g.fractional_power_apply(0.5, &[c(1.0, 0.0)]).unwrap();
        let expected = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((y[0] - expected).norm() < 1e-15);
        assert!(g.fractional_power_apply(0.0, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn sectoriality() {
        let g = DiagonalGenerator::new(vec![c(1.0, 0.0), c(5.0, 0.0)]).unwrap();
        let m = g.sectoriality_constant(1.5).unwrap();
        assert!((m - 1.0 / 1.5f64.sin()).abs() < 1e-15);
        let g = DiagonalGenerator::new(vec![C64::from_polar(1.0, 0.5)]).unwrap();
        assert!((g.sectoriality_constant(1.2).unwrap() - 1.0 / 0.7f64.sin()).abs() < 1e-14);
        assert!(g.sectoriality_constant(0.4).is_err());
    }

    #[test]
    fn oracle_rotation() {
        let g = DiagonalGenerator::new(vec![c(0.0, 1.0), c(0.0, -3.0)]).unwrap();
        let y = g.exp_oracle(std::f64::consts::PI, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((y[0] + 1.0).norm() < 1e-15 && (y[1] + 1.0).norm() < 1e-14);
    }
}
