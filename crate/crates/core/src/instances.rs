//! Bundled test generators and starting vectors.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::operators::{norm, DiagonalGenerator, Generator};
use crate::precision::C64;

/// Dimension of [`analytic_instance`].
pub const ANALYTIC_DIMENSION: usize = 161;

/// Angle used for the sectoriality constant of the bundled analytic instance.
pub const ANALYTIC_NU: f64 = 1.5;

/// Positive spectrum log-spaced over `[1, 1e8]` and `x` with
/// `(A^α x)_k = 1/√d`, so `‖A^α x‖ = 1`.
pub fn analytic_instance(alpha: f64) -> Result<(DiagonalGenerator, Vec<C64>)> {
    let g = DiagonalGenerator::log_spaced(1.0, 1e8, ANALYTIC_DIMENSION)?;
    let w = 1.0 / (ANALYTIC_DIMENSION as f64).sqrt();
    let x = g.eigenvalues().iter().map(|m| C64::new(w * m.re.powf(-alpha), 0.0)).collect();
    Ok((g, x))
}

/// Eigenvalues `0.1 + ik`, `k = 1..64`, and the unweighted unit vector.
pub fn contraction_instance() -> Result<(DiagonalGenerator, Vec<C64>)> {
    let g = DiagonalGenerator::new((1..=64).map(|k| C64::new(0.1, k as f64)).collect())?;
    Ok((g, vec![C64::new(0.125, 0.0); 64]))
}

/// A seeded diagonal contraction generator of dimension `dim`.
///
/// Moduli are log-uniform in `[1e-2, 1e3]`, arguments uniform in
/// `[-π/2, π/2]`, and a quarter of the eigenvalues lie on the imaginary axis.
/// `x` has independent uniform entries in the unit square, normalized.
pub fn random_contraction(seed: u64, dim: usize) -> Result<(DiagonalGenerator, Vec<C64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let eig = (0..dim)
        .map(|_| {
            let r = 10f64.powf(rng.random_range(-2.0..3.0));
            if rng.random_range(0.0..1.0) < 0.25 {
                let sign = if rng.random_range(0.0..1.0) < 0.5 { -1.0 } else { 1.0 };
                C64::new(0.0, sign * r)
            } else {
                C64::from_polar(r, rng.random_range(-half_pi..half_pi))
            }
        })
        .collect();
    let g = DiagonalGenerator::new(eig)?;
    let mut x: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let s = norm(&x);
    x.iter_mut().for_each(|v| *v /= s);
    debug_assert_eq!(g.dimension(), x.len());
    Ok((g, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_normalization() {
        let (g, x) = analytic_instance(2.0).unwrap();
        let y = g.fractional_power_apply(2.0, &x).unwrap();
        assert!((norm(&y) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_is_seeded() {
        let (g1, x1) = random_contraction(7, 12).unwrap();
        let (g2, x2) = random_contraction(7, 12).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(x1, x2);
        assert_ne!(random_contraction(8, 12).unwrap().1, x1);
        assert!(g1.eigenvalues().iter().all(|m| m.re >= 0.0));
        assert!((norm(&x1) - 1.0).abs() < 1e-14);
    }
}
