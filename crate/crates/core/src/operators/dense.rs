use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use f256::f256;
use nalgebra::DMatrix;
use num_complex::Complex;

use super::{check_dimension, check_shift, Generator, Regime};
use crate::error::{domain, Error, Result};
use crate::precision::{from_c64, to_c64, xcomplex_key, Real, XComplex, C64};

/// Row-major LU factors with partial pivoting, `P(μ + A) = LU`.
#[derive(Debug)]
struct Lu<R> {
    dim: usize,
    factors: Vec<Complex<R>>,
    pivots: Vec<usize>,
}

fn l1<R: Real>(z: &Complex<R>) -> R {
    z.re.abs() + z.im.abs()
}

impl<R: Real> Lu<R> {
    fn factor(mut a: Vec<Complex<R>>, dim: usize) -> Option<Self> {
        let scale = a.iter().map(|z| l1(z).to_f64()).fold(0.0, f64::max);
        let tiny = scale * dim as f64 * R::unit_roundoff();
        let mut pivots = vec![0; dim];
        for k in 0..dim {
            let (p, best) = (k..dim)
                .map(|i| (i, l1(&a[i * dim + k])))
                .fold((k, R::zero()), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            if !(best.to_f64() > tiny) {
                return None;
            }
            pivots[k] = p;
            if p != k {
                for j in 0..dim {
                    a.swap(k * dim + j, p * dim + j);
                }
            }
            let pivot = a[k * dim + k];
            for i in k + 1..dim {
                let f = a[i * dim + k] / pivot;
                a[i * dim + k] = f;
                if f.re == R::zero() && f.im == R::zero() {
                    continue;
                }
                for j in k + 1..dim {
                    let u = a[k * dim + j];
                    a[i * dim + j] = a[i * dim + j] - f * u;
                }
            }
        }
        Some(Self {
            dim,
            factors: a,
            pivots,
        })
    }

    fn solve(&self, b: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.dim;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.factors[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.factors[i * n + j] * x[j];
            }
            x[i] = s / self.factors[i * n + i];
        }
        x
    }
}

type Cache<K, R> = Mutex<HashMap<K, Arc<Lu<R>>>>;

/// Dense complex matrix `A` with LU factors of `μ + A` cached per shift.
#[derive(Debug)]
pub struct DenseMatrixGenerator {
    matrix: DMatrix<C64>,
    matrix_ext: Vec<XComplex>,
    regimes: Vec<Regime>,
    spectrum: Vec<C64>,
    cache: Cache<[u64; 2], f64>,
    cache_ext: Cache<[u128; 4], f256>,
}

impl DenseMatrixGenerator {
    /// Wraps a square matrix and computes its spectrum once.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return domain(format!("matrix must be square, got {}x{}", matrix.nrows(), matrix.ncols()));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("matrix has non-finite entries");
        }
        let spectrum = if matrix.nrows() == 0 {
            vec![]
        } else {
            matrix
                .clone()
                .schur()
                .eigenvalues()
                .map(|v| v.iter().copied().collect())
                .unwrap_or_default()
        };
        let d = matrix.nrows();
        let matrix_ext = (0..d * d).map(|k| from_c64(matrix[(k / d, k % d)])).collect();
        Ok(Self {
            matrix,
            matrix_ext,
            regimes: vec![],
            spectrum,
            cache: Mutex::new(HashMap::new()),
            cache_ext: Mutex::new(HashMap::new()),
        })
    }

    /// Declares a regime. Bounded regimes require the computed spectrum to
    /// satisfy `Re ≥ -1e-12`; the constants themselves are trusted.
    pub fn with_regime(mut self, regime: Regime) -> Result<Self> {
        regime.validate()?;
        if let Some(mu) = self.spectrum.iter().find(|m| m.re < -1e-12) {
            return domain(format!("eigenvalue {mu} of A has negative real part; the semigroup is unbounded"));
        }
        self.regimes.push(regime);
        Ok(self)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Eigenvalues computed at construction.
    pub fn spectrum(&self) -> &[C64] {
        &self.spectrum
    }

    fn singular(mu: C64) -> Error {
        Error::SingularShift { mu: format!("{mu}") }
    }

    fn lu(&self, mu: C64) -> Result<Arc<Lu<f64>>> {
        let key = [mu.re.to_bits(), mu.im.to_bits()];
        if let Some(lu) = self.cache.lock().expect("factor cache poisoned").get(&key) {
            return Ok(lu.clone());
        }
        let d = self.dimension();
        let mut a: Vec<C64> = (0..d * d).map(|k| self.matrix[(k / d, k % d)]).collect();
        for i in 0..d {
            a[i * d + i] += mu;
        }
        let lu = Arc::new(Lu::factor(a, d).ok_or_else(|| Self::singular(mu))?);
        self.cache.lock().expect("factor cache poisoned").insert(key, lu.clone());
        Ok(lu)
    }

    fn lu_ext(&self, mu: XComplex) -> Result<Arc<Lu<f256>>> {
        let key = xcomplex_key(&mu);
        if let Some(lu) = self.cache_ext.lock().expect("factor cache poisoned").get(&key) {
            return Ok(lu.clone());
        }
        let d = self.dimension();
        let mut a = self.matrix_ext.clone();
        for i in 0..d {
            a[i * d + i] += mu;
        }
        let lu = Arc::new(Lu::factor(a, d).ok_or_else(|| Self::singular(to_c64(mu)))?);
        self.cache_ext.lock().expect("factor cache poisoned").insert(key, lu.clone());
        Ok(lu)
    }

    /// Number of cached factorizations (double, extended).
    pub fn cached_factorizations(&self) -> (usize, usize) {
        (
            self.cache.lock().expect("factor cache poisoned").len(),
            self.cache_ext.lock().expect("factor cache poisoned").len(),
        )
    }
}

/// Max row sum norm.
fn inf_norm(m: &DMatrix<C64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `e^{M}` by Taylor series on `M / 2^s` with `‖M / 2^s‖ ≤ 1/4`, then `s` squarings.
pub(crate) fn expm_taylor(m: &DMatrix<C64>) -> DMatrix<C64> {
    let d = m.nrows();
    let norm = inf_norm(m);
    let s = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let scaled = m * C64::new(2f64.powi(-s), 0.0);
    let mut result = DMatrix::<C64>::identity(d, d);
    let mut term = DMatrix::<C64>::identity(d, d);
    // (1/4)^k / k! < 1e-17 for k = 18
    for k in 1..=18 {
        term = &term * &scaled * C64::new(1.0 / k as f64, 0.0);
        result += &term;
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

impl Generator for DenseMatrixGenerator {
    fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_dimension(self.dimension(), x)?;
        let v = &self.matrix * nalgebra::DVector::from_column_slice(x);
        Ok(v.iter().copied().collect())
    }

    fn resolvent_solve(&self, mu: C64, x: &[C64]) -> Result<Vec<C64>> {
        check_dimension(self.dimension(), x)?;
        check_shift(mu)?;
        Ok(self.lu(mu)?.solve(x))
    }

    fn resolvent_solve_extended(&self, mu: XComplex, x: &[XComplex]) -> Result<Vec<XComplex>> {
        if x.len() != self.dimension() {
            return domain(format!("vector has length {}, generator dimension is {}", x.len(), self.dimension()));
        }
        check_shift(to_c64(mu))?;
        Ok(self.lu_ext(mu)?.solve(x))
    }

    fn exp_oracle(&self, t: f64, x: &[C64]) -> Result<Vec<C64>> {
        check_dimension(self.dimension(), x)?;
        if !(t >= 0.0) {
            return domain(format!("time must be non-negative, got {t}"));
        }
        if t == 0.0 {
            return Ok(x.to_vec());
        }
        let e = expm_taylor(&(&self.matrix * C64::new(-t, 0.0)));
        let v = e * nalgebra::DVector::from_column_slice(x);
        Ok(v.iter().copied().collect())
    }

    fn regimes(&self) -> &[Regime] {
        &self.regimes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_and_caches() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(2.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(3.0, 0.0)],
        );
        let g = DenseMatrixGenerator::new(m).unwrap();
        let x = [C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let y = g.resolvent_solve(C64::new(1.0, 0.0), &x).unwrap();
        // (1 + A) y = x: 4 y1 = 1, 3 y0 + y1 = 1
        assert!((y[1] - 0.25).norm() < 1e-16 && (y[0] - 0.25).norm() < 1e-16);
        g.resolvent_solve(C64::new(1.0, 0.0), &x).unwrap();
        assert_eq!(g.cached_factorizations(), (1, 0));
    }

    #[test]
    fn singular_shift() {
        let m = DMatrix::from_row_slice(1, 1, &[C64::new(-1.0, 0.0)]);
        let g = DenseMatrixGenerator::new(m).unwrap();
        assert!(matches!(
            g.resolvent_solve(C64::new(1.0, 0.0), &[C64::new(1.0, 0.0)]),
            Err(Error::SingularShift { .. })
        ));
        assert!(g.with_regime(Regime::UniformlyBounded { m: 1.0 }).is_err());
    }

    #[test]
    fn zero_generator() {
        let g = DenseMatrixGenerator::new(DMatrix::zeros(3, 3)).unwrap();
        let x = [C64::new(1.0, 2.0); 3];
        let y = g.resolvent_solve(C64::new(2.0, 0.0), &x).unwrap();
        assert!(y.iter().all(|v| (v - C64::new(0.5, 1.0)).norm() < 1e-16));
        assert_eq!(g.exp_oracle(3.0, &x).unwrap(), x.to_vec());
    }

    #[test]
    fn taylor_matches_scalar() {
        let m = DMatrix::from_row_slice(1, 1, &[C64::new(-7.5, 3.0)]);
        let e = expm_taylor(&m)[(0, 0)];
        let exact = C64::new(-7.5, 3.0).exp();
        assert!((e - exact).norm() / exact.norm() < 1e-14);
    }
}
