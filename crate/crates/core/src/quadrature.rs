//! Gauss–Legendre quadrature with node doubling.
//!
//! A rule with `m` nodes is compared against the rule with `2m` nodes; the
//! finer result is accepted once the two agree to the requested tolerance.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::precision::C64;

/// Values that can be accumulated by the quadrature routines.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, other: &Self, w: f64);
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += w * other;
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero_like(&self) -> Self {
        C64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += other * w;
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for Vec<C64> {
    fn zero_like(&self) -> Self {
        vec![C64::new(0.0, 0.0); self.len()]
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b * w;
        }
    }
    fn distance(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Node-doubling controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    pub initial_nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            initial_nodes: 16,
            max_nodes: 4096,
            rel_tol: 1e-10,
            abs_tol: 0.0,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_initial_nodes(mut self, nodes: usize) -> Self {
        self.initial_nodes = nodes.max(1);
        self
    }
}

type Rule = Arc<Vec<(f64, f64)>>;

/// Nodes and weights on `[-1, 1]`, cached per node count.
pub fn gauss_legendre_rule(nodes: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&nodes) {
        return rule.clone();
    }
    let degree = NonZeroUsize::new(nodes.max(1)).expect("nonzero");
    let rule: Rule = Arc::new(GaussLegendre::new(degree).as_node_weight_pairs().to_vec());
    cache
        .lock()
        .expect("quadrature cache poisoned")
        .entry(nodes)
        .or_insert(rule)
        .clone()
}

/// Fixed `nodes`-point Gauss–Legendre approximation of `∫_a^b f`.
pub fn fixed_rule<T, F>(a: f64, b: f64, nodes: usize, f: &mut F) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let rule = gauss_legendre_rule(nodes);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc: Option<T> = None;
    for &(x, w) in rule.iter() {
        let v = f(mid + half * x)?;
        match acc.as_mut() {
            Some(s) => s.add_scaled(&v, w * half),
            None => {
                let mut s = v.zero_like();
                s.add_scaled(&v, w * half);
                acc = Some(s);
            }
        }
    }
    acc.ok_or_else(|| Error::ConvergenceFailure("empty quadrature rule".into()))
}

/// `∫_a^b f` with node doubling until two successive rules agree.
pub fn integrate<T, F>(a: f64, b: f64, mut f: F, opts: &QuadratureOptions) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    integrate_ref(a, b, &mut f, opts)
}

fn integrate_ref<T, F>(a: f64, b: f64, f: &mut F, opts: &QuadratureOptions) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let mut nodes = opts.initial_nodes.max(1);
    let mut coarse = fixed_rule(a, b, nodes, f)?;
    loop {
        if nodes * 2 > opts.max_nodes {
            return Err(Error::ConvergenceFailure(format!(
                "no agreement on [{a}, {b}] with up to {} nodes (rel_tol {:e})",
                opts.max_nodes, opts.rel_tol
            )));
        }
        nodes *= 2;
        let fine = fixed_rule(a, b, nodes, f)?;
        let diff = fine.distance(&coarse);
        if diff <= opts.rel_tol * fine.magnitude() || diff <= opts.abs_tol || diff == 0.0 {
            return Ok(fine);
        }
        coarse = fine;
    }
}

/// Sum of doubling rules over consecutive panels `[breaks[i], breaks[i+1]]`.
pub fn integrate_panels<T, F>(breaks: &[f64], mut f: F, opts: &QuadratureOptions) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    if breaks.len() < 2 {
        return Err(Error::Domain("need at least one panel".into()));
    }
    let mut total: Option<T> = None;
    for w in breaks.windows(2) {
        let part = integrate_ref(w[0], w[1], &mut f, opts)?;
        match total.as_mut() {
            Some(t) => t.add_scaled(&part, 1.0),
            None => total = Some(part),
        }
    }
    Ok(total.expect("at least one panel"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let v: f64 = fixed_rule(0.0, 2.0, 4, &mut |x: f64| Ok(x.powi(7))).unwrap();
        assert!((v - 2f64.powi(8) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_converges_on_oscillatory_integrand() {
        let opts = QuadratureOptions::default();
        let v: C64 = integrate(0.0, 10.0, |x| Ok(C64::new(0.0, x).exp()), &opts).unwrap();
        let exact = (C64::new(0.0, 10.0).exp() - 1.0) / C64::new(0.0, 1.0);
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn reports_failure_when_nodes_run_out() {
        let opts = QuadratureOptions {
            initial_nodes: 2,
            max_nodes: 8,
            rel_tol: 1e-14,
            abs_tol: 0.0,
        };
        let r: Result<f64> = integrate(0.0, 200.0, |x| Ok((x * x).sin()), &opts);
        assert!(matches!(r, Err(Error::ConvergenceFailure(_))));
    }

    #[test]
    fn panels_add_up() {
        let opts = QuadratureOptions::default();
        let v: f64 = integrate_panels(&[0.0, 1.0, 3.0, 7.0], |x| Ok(x.exp()), &opts).unwrap();
        assert!((v - (7f64.exp() - 1.0)).abs() < 1e-9);
    }
}
