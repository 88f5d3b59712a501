//! Inversion of vector-valued Laplace transforms,
//! `f(t) ≈ Σ_j (b_j/t) f̂(λ_j/t)`, with built-in transform pairs.
//!
//! The residues `b_j` grow like `1e23` at `n = 40` while the sum is `O(1)`,
//! so transforms are evaluated in extended precision.

use std::collections::BTreeMap;
use std::sync::Arc;

use f256::f256;
use serde::{Deserialize, Serialize};

use crate::bounds::c_alpha;
use crate::error::{domain, Error, Result};
use crate::operators::norm;
use crate::partial_fractions::{partial_fraction_form, PartialFractionForm};
use crate::precision::{cabs, ext_from_str, from_c64, to_c64, Real, XComplex, C64};
use crate::quadrature::{integrate_panels, QuadratureOptions};

type TimeFn = dyn Fn(f64) -> Vec<C64> + Send + Sync;
type TransformFn = dyn Fn(XComplex) -> Result<Vec<XComplex>> + Send + Sync;

/// A function `f: [0, ∞) → C^d` together with its Laplace transform.
///
/// `lipschitz` maps `k` to the seminorm `L(f^{(k-1)})`, declaring
/// `f ∈ C_ub^{k-1,1}` for every key.
#[derive(Clone)]
pub struct TransformPair {
    pub name: String,
    pub dimension: usize,
    f: Arc<TimeFn>,
    f_hat: Arc<TransformFn>,
    pub lipschitz: BTreeMap<u32, f64>,
}

impl std::fmt::Debug for TransformPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransformPair")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl TransformPair {
    /// A pair whose transform is evaluated in extended precision.
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        f: impl Fn(f64) -> Vec<C64> + Send + Sync + 'static,
        f_hat: impl Fn(XComplex) -> Result<Vec<XComplex>> + Send + Sync + 'static,
        lipschitz: BTreeMap<u32, f64>,
    ) -> Self {
        Self {
            name: name.into(),
            dimension,
            f: Arc::new(f),
            f_hat: Arc::new(f_hat),
            lipschitz,
        }
    }

    /// A pair whose transform is only available in double precision.
    ///
    /// Inversion then loses accuracy once `Σ|b_j|` outgrows `1e16`
    /// (around `n = 25`).
    pub fn from_double(
        name: impl Into<String>,
        dimension: usize,
        f: impl Fn(f64) -> Vec<C64> + Send + Sync + 'static,
        f_hat: impl Fn(C64) -> Result<Vec<C64>> + Send + Sync + 'static,
        lipschitz: BTreeMap<u32, f64>,
    ) -> Self {
        Self::new(
            name,
            dimension,
            f,
            move |z| Ok(f_hat(to_c64(z))?.into_iter().map(from_c64).collect()),
            lipschitz,
        )
    }

    pub fn f(&self, t: f64) -> Vec<C64> {
        (self.f)(t)
    }

    pub fn f_hat(&self, lambda: C64) -> Result<Vec<C64>> {
        Ok(self.f_hat_ext(from_c64(lambda))?.into_iter().map(to_c64).collect())
    }

    pub fn f_hat_ext(&self, lambda: XComplex) -> Result<Vec<XComplex>> {
        let v = (self.f_hat)(lambda)?;
        if v.len() != self.dimension {
            return Err(Error::TransformEvaluation(format!(
                "transform '{}' returned {} components, expected {}",
                self.name,
                v.len(),
                self.dimension
            )));
        }
        Ok(v)
    }
}

fn x(v: f64) -> f256 {
    f256::from_f64(v)
}

fn xc(re: f64, im: f64) -> XComplex {
    XComplex::new(x(re), x(im))
}

fn xexp(z: XComplex) -> XComplex {
    let (s, c) = z.im.sin_cos();
    let r = z.re.exp();
    XComplex::new(r * c, r * s)
}

fn xln(z: XComplex) -> XComplex {
    XComplex::new(cabs(z).ln(), z.im.atan2(&z.re))
}

fn euler_gamma() -> f256 {
    ext_from_str("0.57721566490153286060651209008240243104215933593992359880576723488486772677766467")
        .expect("valid constant")
}

/// `e^z E_1(z)` for `Re z > 0` in extended precision: power series for
/// `|z| < 4`, a continued fraction evaluated by the modified Lentz method otherwise.
pub fn exp_e1(z: XComplex) -> Result<XComplex> {
    let tiny = x(1e-300);
    let eps = 2f64.powi(-230);
    if cabs(z).to_f64() < 4.0 {
        // E_1(z) = -γ - ln z - Σ_{k≥1} (-z)^k / (k k!)
        let mut sum = xc(0.0, 0.0);
        let mut term = xc(1.0, 0.0);
        for k in 1..400 {
            term = term * (-z) / x(k as f64);
            let add = term / x(k as f64);
            sum += add;
            if cabs(add).to_f64() <= eps * cabs(sum).to_f64() {
                let e1 = XComplex::new(-euler_gamma(), x(0.0)) - xln(z) - sum;
                return Ok(xexp(z) * e1);
            }
        }
        return Err(Error::ConvergenceFailure(format!("E1 series at {}", to_c64(z))));
    }
    // e^z E_1(z) = 1/(z+1- 1/(z+3- 4/(z+5- ...)))
    let mut f = z + x(1.0);
    if cabs(f).to_f64() == 0.0 {
        f = xc(1e-300, 0.0);
    }
    let mut c = f;
    let mut d = xc(0.0, 0.0);
    for k in 1..20_000 {
        let a = x(-((k * k) as f64));
        let b = z + x((2 * k + 1) as f64);
        d = b + d * a;
        if cabs(d) < tiny {
            d = xc(1e-300, 0.0);
        }
        c = b + (xc(1.0, 0.0) / c) * a;
        if cabs(c) < tiny {
            c = xc(1e-300, 0.0);
        }
        d = xc(1.0, 0.0) / d;
        let delta = c * d;
        f *= delta;
        if cabs(delta - xc(1.0, 0.0)).to_f64() <= eps {
            return Ok(xc(1.0, 0.0) / f);
        }
    }
    Err(Error::ConvergenceFailure(format!("E1 continued fraction at {}", to_c64(z))))
}

fn seminorms(values: &[f64]) -> BTreeMap<u32, f64> {
    values.iter().enumerate().map(|(i, &v)| (i as u32 + 1, v)).collect()
}

fn re(v: f64) -> Vec<C64> {
    vec![C64::new(v, 0.0)]
}

/// The built-in pairs: `one`, `exp1`, `exp5`, `sin1`, `sin4` and `recip1p`
/// (`1/(1+t)`, whose transform is `e^λ E_1(λ)`). Seminorms are declared for
/// `k = 1, 2, 3`.
pub fn builtin_pairs() -> Vec<TransformPair> {
    let mut out = vec![TransformPair::new(
        "one",
        1,
        |_| re(1.0),
        |l| Ok(vec![xc(1.0, 0.0) / l]),
        seminorms(&[0.0, 0.0, 0.0]),
    )];
    for a in [1.0f64, 5.0] {
        out.push(TransformPair::new(
            format!("exp{a}"),
            1,
            move |t| re((-a * t).exp()),
            move |l| Ok(vec![xc(1.0, 0.0) / (l + x(a))]),
            seminorms(&[a, a * a, a * a * a]),
        ));
    }
    for w in [1.0f64, 4.0] {
        out.push(TransformPair::new(
            format!("sin{w}"),
            1,
            move |t| re((w * t).sin()),
            move |l| Ok(vec![xc(w, 0.0) / (l * l + x(w * w))]),
            seminorms(&[w, w * w, w * w * w]),
        ));
    }
    out.push(TransformPair::new(
        "recip1p",
        1,
        |t| re(1.0 / (1.0 + t)),
        |l| Ok(vec![exp_e1(l)?]),
        seminorms(&[1.0, 2.0, 6.0]),
    ));
    out
}

/// Built-in pairs plus pairs registered by the caller.
#[derive(Clone, Debug)]
pub struct Registry {
    pairs: Vec<TransformPair>,
}

impl Default for Registry {
    fn default() -> Self {
        Self { pairs: builtin_pairs() }
    }
}

impl Registry {
    /// Adds a pair, replacing any pair of the same name.
    pub fn register(&mut self, pair: TransformPair) {
        self.pairs.retain(|p| p.name != pair.name);
        self.pairs.push(pair);
    }

    pub fn get(&self, name: &str) -> Option<&TransformPair> {
        self.pairs.iter().find(|p| p.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.pairs.iter().map(|p| p.name.as_str()).collect()
    }
}

/// `Σ_j (b_j/t) f̂(λ_j/t)`, summed in pole order in extended precision.
pub fn invert(pf: &PartialFractionForm, pair: &TransformPair, t: f64) -> Result<Vec<C64>> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("Laplace inversion needs t > 0, got {t}"));
    }
    let tx = x(t);
    let mut acc = vec![xc(0.0, 0.0); pair.dimension];
    for (l, b) in pf.poles_ext.iter().zip(&pf.residues_ext) {
        let w = *b / tx;
        for (a, v) in acc.iter_mut().zip(pair.f_hat_ext(*l / tx)?) {
            *a += w * v;
        }
    }
    Ok(acc.into_iter().map(to_c64).collect())
}

/// Inversion error at `(n, t)` with the bound for each declared `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionReport {
    pub pair: String,
    pub n: usize,
    pub t: f64,
    pub value: Vec<C64>,
    pub exact: Vec<C64>,
    pub error: f64,
    /// `(k, C(k) t^k (n+1)^{-k+1/2} L(f^{(k-1)}))` for declared `k` with `n ≥ k - 1/2`.
    pub bounds: Vec<(u32, f64)>,
}

pub fn inversion_bound(k: u32, t: f64, n: usize, seminorm: f64) -> Result<f64> {
    let kf = k as f64;
    if (n as f64) < kf - 0.5 {
        return domain(format!("inversion bound for k = {k} needs n >= {}", kf - 0.5));
    }
    Ok(c_alpha(kf)? * t.powf(kf) * (n as f64 + 1.0).powf(-kf + 0.5) * seminorm)
}

pub fn inversion_error(pair: &TransformPair, n: usize, t: f64) -> Result<InversionReport> {
    let pf = partial_fraction_form(n)?;
    let value = invert(&pf, pair, t)?;
    let exact = pair.f(t);
    let diff: Vec<C64> = value.iter().zip(&exact).map(|(a, b)| a - b).collect();
    let bounds = pair
        .lipschitz
        .iter()
        .filter(|(&k, _)| n as f64 >= k as f64 - 0.5)
        .map(|(&k, &l)| Ok((k, inversion_bound(k, t, n, l)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(InversionReport {
        pair: pair.name.clone(),
        n,
        t,
        value,
        exact,
        error: norm(&diff),
        bounds,
    })
}

/// `∫_0^∞ e^{-λt} f(t) dt` by Gauss–Legendre on doubling panels, truncated
/// once `e^{-Re λ t} < 1e-17`.
pub fn laplace_quadrature(pair: &TransformPair, lambda: C64) -> Result<Vec<C64>> {
    if !(lambda.re > 0.0) {
        return domain("Laplace quadrature needs Re lambda > 0");
    }
    let end = 17.0 * std::f64::consts::LN_10 / lambda.re;
    let step = (1.0 / lambda.norm()).min(1.0);
    let mut breaks = vec![0.0];
    let mut b = step;
    while b < end {
        breaks.push(b);
        b = (b * 2.0).min(b + 2.0 / lambda.norm().max(1e-3) * 8.0);
    }
    breaks.push(end);
    let opts = QuadratureOptions::default().with_rel_tol(1e-12);
    integrate_panels(
        &breaks,
        |t| Ok(pair.f(t).into_iter().map(|v| v * (-lambda * t).exp()).collect::<Vec<C64>>()),
        &opts,
    )
}

/// Largest `|f(t)|` over a log grid in `[1e-3, 1e3]` and `t = 0`.
pub fn sup_on_grid(pair: &TransformPair) -> f64 {
    std::iter::once(0.0)
        .chain(crate::verify::log_grid(1e-3, 1e3, 400))
        .map(|t| norm(&pair.f(t)))
        .fold(0.0, f64::max)
}
