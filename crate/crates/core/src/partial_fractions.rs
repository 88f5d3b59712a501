//! Poles `λ_j` and residues `b_j` of `r_n`, so that
//! `r_n(z) = Σ_j b_j / (λ_j - z)`.
//!
//! Both are kept in extended precision: the residues of `r_n` grow like
//! `10^{0.6 n}` while their sum stays `±(n+1)`, so any double-precision
//! summation of the partial fractions loses every digit for moderate `n`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use f256::f256;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pade::{horner, pade_coefficients, PadePair};
use crate::precision::{
    cabs, cabs_f64, ext_from_str, ext_to_string, from_c64, rational_to_f64, to_c64, Real, XComplex, C64,
    EXTENDED_BITS,
};
use crate::roots::{
    eval_integer_poly, polish_integer_roots, real_polynomial_roots, residual_scale, sort_roots, symmetrize,
    FixedComplex, RootOptions,
};

/// Largest order for which the structural checks are part of the contract.
pub const MAX_SUPPORTED_ORDER: usize = 64;

/// Environment variable naming a directory for cached partial-fraction forms.
pub const CACHE_ENV: &str = "SUBPADE_POLE_CACHE";

/// Outcome of the structural checks on a partial-fraction form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFlags {
    pub distinct: bool,
    pub right_half_plane: bool,
    pub conjugate_closed: bool,
    pub reconstruction: bool,
}

impl ValidationFlags {
    pub fn all(&self) -> bool {
        self.distinct && self.right_half_plane && self.conjugate_closed && self.reconstruction
    }
}

/// Poles and residues of `r_n` with provenance.
#[derive(Clone, Debug)]
pub struct PartialFractionForm {
    pub n: usize,
    pub poles: Vec<C64>,
    pub residues: Vec<C64>,
    pub poles_ext: Vec<XComplex>,
    pub residues_ext: Vec<XComplex>,
    pub precision_bits: u32,
    pub validated: ValidationFlags,
    /// `false` for `n` beyond [`MAX_SUPPORTED_ORDER`].
    pub supported_order: bool,
    /// `max_j |Q_n(λ_j)| / Σ_i |q_i| |λ_j|^i`.
    pub max_root_residual: f64,
    /// `Σ_j b_j`, to be compared with `(-1)^n (n+1)`.
    pub residue_sum: C64,
}

fn xzero() -> XComplex {
    XComplex::new(f256::from_f64(0.0), f256::from_f64(0.0))
}

/// `(2n+1)! · poly`, which has integer coefficients for both `P_n` and `Q_n`.
fn integer_coefficients(n: usize, poly: &crate::pade::RationalPolynomial) -> Vec<BigInt> {
    let scale: BigInt = (1..=(2 * n + 1)).map(BigInt::from).product();
    poly.coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(scale.clone())).to_integer())
        .collect()
}

/// Roots of `Q_n` in extended precision, sorted by `(Re, Im)`.
///
/// Aberth refinement on the `f256`-rounded coefficients is followed by
/// Newton steps against the exact integer polynomial `(2n+1)! Q_n`.
fn extended_poles(pair: &PadePair) -> Result<(Vec<XComplex>, f64)> {
    let q = pair.q().rounded::<f256>();
    let report = real_polynomial_roots(q, &RootOptions::default())?;
    let q_int = integer_coefficients(pair.order(), pair.q());
    let mut roots = polish_integer_roots(&q_int, &report.roots, 3);
    symmetrize(&mut roots);
    sort_roots(&mut roots);
    let residual = roots
        .iter()
        .map(|l| (cabs(horner(q, *l)) / residual_scale(q, *l)).to_f64())
        .fold(0.0f64, f64::max);
    Ok((roots, residual))
}

/// `b_j = -P_n(λ_j) / Q_n'(λ_j)`, both evaluated exactly up to the final
/// fixed-point rounding (the common factor `(2n+1)!` cancels).
fn extended_residues(pair: &PadePair, poles: &[XComplex]) -> Result<Vec<XComplex>> {
    let p_int = integer_coefficients(pair.order(), pair.p());
    let q_int = integer_coefficients(pair.order(), pair.q());
    poles
        .par_iter()
        .map(|l| {
            let z = FixedComplex::from_ext(*l);
            let (_, dq) = eval_integer_poly(&q_int, &z);
            let (p, _) = eval_integer_poly(&p_int, &z);
            let dq = dq.to_ext();
            let scale = residual_scale(pair.dq().rounded::<f256>(), *l).to_f64();
            if cabs_f64(dq) < 1e-30 * scale {
                return Err(Error::ValidationFailure(format!(
                    "Q_n'({}) vanishes: pole is not simple",
                    to_c64(*l)
                )));
            }
            Ok(-p.to_ext() / dq)
        })
        .collect()
}

/// `r_n(z)` for a Gaussian-rational `z`, exactly, rounded to `f64`.
fn exact_rn(pair: &PadePair, z: C64) -> C64 {
    let re = BigRational::from_float(z.re).expect("finite sample");
    let im = BigRational::from_float(z.im).expect("finite sample");
    let eval = |coeffs: &[BigRational]| {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for c in coeffs.iter().rev() {
            let na = &a * &re - &b * &im + c;
            let nb = &a * &im + &b * &re;
            a = na;
            b = nb;
        }
        (a, b)
    };
    let (pa, pb) = eval(pair.p().coeffs());
    let (qa, qb) = eval(pair.q().coeffs());
    let den = &qa * &qa + &qb * &qb;
    let ra = (&pa * &qa + &pb * &qb) / &den;
    let rb = (&pb * &qa - &pa * &qb) / &den;
    C64::new(rational_to_f64(&ra), rational_to_f64(&rb))
}

fn check_structure(n: usize, poles: &[XComplex], residues: &[XComplex], pair: &PadePair) -> (ValidationFlags, C64) {
    let p64: Vec<C64> = poles.iter().map(|p| to_c64(*p)).collect();
    let max_mod = p64.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    let mut distinct = p64.len() == n + 1;
    for i in 0..p64.len() {
        for j in 0..i {
            if (p64[i] - p64[j]).norm() <= 1e-8 * max_mod {
                distinct = false;
            }
        }
    }
    let right_half_plane = poles.iter().all(|p| p.re > f256::from_f64(0.0));

    let mut conjugate_closed = true;
    for (i, p) in p64.iter().enumerate() {
        let partner = p64
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1 - p.conj())
                    .norm()
                    .partial_cmp(&(b.1 - p.conj()).norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(j, _)| j);
        match partner {
            Some(j) if (p64[j] - p.conj()).norm() <= 1e-12 * p.norm() => {
                let bi = to_c64(residues[i]);
                let bj = to_c64(residues[j]);
                if (bj - bi.conj()).norm() > 1e-12 * bi.norm() {
                    conjugate_closed = false;
                }
            }
            _ => conjugate_closed = false,
        }
    }

    let mut sum = xzero();
    for b in residues {
        sum += *b;
    }
    let sum64 = to_c64(sum);
    let expected = if n.is_multiple_of(2) { n as f64 + 1.0 } else { -(n as f64 + 1.0) };
    let mut reconstruction = (sum64 - expected).norm() <= 1e-10 * expected.abs();
    for z in reconstruction_samples() {
        let zx = from_c64::<f256>(z);
        let pf = to_c64(pf_sum_ext(poles, residues, zx));
        let direct = exact_rn(pair, z);
        let rel = (pf - direct).norm() / (1.0 + direct.norm());
        if !(rel <= 1e-9) {
            reconstruction = false;
        }
    }
    (
        ValidationFlags {
            distinct,
            right_half_plane,
            conjugate_closed,
            reconstruction,
        },
        sum64,
    )
}

fn reconstruction_samples() -> [C64; 6] {
    [
        C64::new(0.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 10.0),
        C64::new(-30.0, 7.0),
        C64::new(0.5, -300.0),
        C64::new(-1000.0, 0.0),
    ]
}

fn pf_sum_ext(poles: &[XComplex], residues: &[XComplex], z: XComplex) -> XComplex {
    let mut acc = xzero();
    for (l, b) in poles.iter().zip(residues) {
        acc += *b / (*l - z);
    }
    acc
}

fn build(n: usize) -> Result<PartialFractionForm> {
    let pair = pade_coefficients(n);
    let (poles_ext, max_root_residual) = extended_poles(&pair)?;
    let residues_ext = extended_residues(&pair, &poles_ext)?;
    assemble(n, &pair, poles_ext, residues_ext, max_root_residual)
}

fn assemble(
    n: usize,
    pair: &PadePair,
    poles_ext: Vec<XComplex>,
    residues_ext: Vec<XComplex>,
    max_root_residual: f64,
) -> Result<PartialFractionForm> {
    let (validated, residue_sum) = check_structure(n, &poles_ext, &residues_ext, pair);
    let supported_order = n <= MAX_SUPPORTED_ORDER;
    let pf = PartialFractionForm {
        n,
        poles: poles_ext.iter().map(|p| to_c64(*p)).collect(),
        residues: residues_ext.iter().map(|b| to_c64(*b)).collect(),
        poles_ext,
        residues_ext,
        precision_bits: EXTENDED_BITS,
        validated,
        supported_order,
        max_root_residual,
        residue_sum,
    };
    if supported_order {
        if !validated.distinct {
            return Err(Error::ValidationFailure(format!("poles of Q_{n} are not pairwise distinct")));
        }
        if !validated.right_half_plane {
            return Err(Error::ValidationFailure(format!(
                "a pole of Q_{n} has nonpositive real part"
            )));
        }
        if !(max_root_residual <= 1e-20) {
            return Err(Error::ValidationFailure(format!(
                "root residual {max_root_residual:e} exceeds 1e-20"
            )));
        }
    }
    Ok(pf)
}

/// All `n + 1` roots of `Q_n`, sorted by `(Re, Im)`.
pub fn poles(n: usize) -> Result<Vec<C64>> {
    Ok(partial_fraction_form(n)?.poles.clone())
}

/// Residues at the given poles. Each pole is first polished by Newton's
/// method against `Q_n` in extended precision, so inputs only need to be
/// accurate to double precision.
pub fn residues(n: usize, poles: &[C64]) -> Result<Vec<C64>> {
    let pair = pade_coefficients(n);
    let q_int = integer_coefficients(n, pair.q());
    let start: Vec<XComplex> = poles.iter().map(|&p| from_c64(p)).collect();
    let polished = polish_integer_roots(&q_int, &start, 6);
    let b = extended_residues(&pair, &polished)?;
    Ok(b.into_iter().map(to_c64).collect())
}

/// `Σ_j b_j / (λ_j - z)` summed in extended precision in pole order.
pub fn eval_partial_fraction(pf: &PartialFractionForm, z: C64) -> Result<C64> {
    eval_partial_fraction_ext(pf, from_c64(z)).map(to_c64)
}

/// Extended-precision variant of [`eval_partial_fraction`].
pub fn eval_partial_fraction_ext(pf: &PartialFractionForm, z: XComplex) -> Result<XComplex> {
    for (l, l64) in pf.poles_ext.iter().zip(&pf.poles) {
        let d = cabs_f64(*l - z);
        if d < 1e-13 * l64.norm().max(1.0) {
            return Err(Error::PoleProximity {
                z: format!("{}", to_c64(z)),
                magnitude: d,
                threshold: 1e-13 * l64.norm().max(1.0),
            });
        }
    }
    Ok(pf_sum_ext(&pf.poles_ext, &pf.residues_ext, z))
}

/// Cached, validated partial-fraction form of `r_n`.
///
/// When `SUBPADE_POLE_CACHE` names a directory, forms are also read from and
/// written to `pf-n{n}-b{bits}.json` there.
pub fn partial_fraction_form(n: usize) -> Result<Arc<PartialFractionForm>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PartialFractionForm>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(pf) = cache.lock().expect("pole cache poisoned").get(&n) {
        return Ok(pf.clone());
    }
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let from_disk = dir.as_deref().and_then(|d| load_cached(d, n).ok());
    let pf = match from_disk {
        Some(pf) => pf,
        None => {
            let pf = build(n)?;
            if let Some(d) = dir.as_deref() {
                // a failed cache write must not fail the computation
                let _ = store_cached(d, &pf);
            }
            pf
        }
    };
    let pf = Arc::new(pf);
    Ok(cache
        .lock()
        .expect("pole cache poisoned")
        .entry(n)
        .or_insert(pf)
        .clone())
}

/// Serialized form of a [`PartialFractionForm`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialFractionDocument {
    pub n: usize,
    pub poles: Vec<[f64; 2]>,
    pub residues: Vec<[f64; 2]>,
    pub precision_bits: u32,
    pub poles_extended: Vec<[String; 2]>,
    pub residues_extended: Vec<[String; 2]>,
    pub validated: ValidationFlags,
    pub residue_sum: [f64; 2],
    pub expected_residue_sum: f64,
    pub max_root_residual: f64,
}

fn pair_of(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn strings_of(z: &XComplex) -> [String; 2] {
    [ext_to_string(z.re), ext_to_string(z.im)]
}

fn parse_ext(s: &[String; 2]) -> Result<XComplex> {
    let re = ext_from_str(&s[0]).ok_or_else(|| Error::Parse(format!("bad extended number {}", s[0])))?;
    let im = ext_from_str(&s[1]).ok_or_else(|| Error::Parse(format!("bad extended number {}", s[1])))?;
    Ok(XComplex::new(re, im))
}

impl PartialFractionForm {
    pub fn to_document(&self) -> PartialFractionDocument {
        let n = self.n as f64;
        PartialFractionDocument {
            n: self.n,
            poles: self.poles.iter().copied().map(pair_of).collect(),
            residues: self.residues.iter().copied().map(pair_of).collect(),
            precision_bits: self.precision_bits,
            poles_extended: self.poles_ext.iter().map(strings_of).collect(),
            residues_extended: self.residues_ext.iter().map(strings_of).collect(),
            validated: self.validated,
            residue_sum: pair_of(self.residue_sum),
            expected_residue_sum: if self.n.is_multiple_of(2) { n + 1.0 } else { -(n + 1.0) },
            max_root_residual: self.max_root_residual,
        }
    }

    /// Rebuilds a form from a document; the structural checks are rerun
    /// rather than trusted.
    pub fn from_document(doc: &PartialFractionDocument) -> Result<Self> {
        if doc.precision_bits != EXTENDED_BITS {
            return Err(Error::Parse(format!(
                "cached precision {} differs from {EXTENDED_BITS}",
                doc.precision_bits
            )));
        }
        if doc.poles_extended.len() != doc.n + 1 || doc.residues_extended.len() != doc.n + 1 {
            return Err(Error::Parse("wrong number of poles or residues".into()));
        }
        let poles: Vec<XComplex> = doc.poles_extended.iter().map(parse_ext).collect::<Result<_>>()?;
        let residues: Vec<XComplex> = doc.residues_extended.iter().map(parse_ext).collect::<Result<_>>()?;
        let pair = pade_coefficients(doc.n);
        let q = pair.q().rounded::<f256>();
        let residual = poles
            .iter()
            .map(|l| (cabs(horner(q, *l)) / residual_scale(q, *l)).to_f64())
            .fold(0.0f64, f64::max);
        assemble(doc.n, &pair, poles, residues, residual)
    }
}

fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("pf-n{n}-b{EXTENDED_BITS}.json"))
}

fn load_cached(dir: &Path, n: usize) -> Result<PartialFractionForm> {
    let text = std::fs::read_to_string(cache_path(dir, n))?;
    let doc: PartialFractionDocument = serde_json::from_str(&text)?;
    if doc.n != n {
        return Err(Error::Parse("cache entry has the wrong order".into()));
    }
    let pf = PartialFractionForm::from_document(&doc)?;
    if !pf.validated.all() {
        return Err(Error::ValidationFailure("cached form fails validation".into()));
    }
    Ok(pf)
}

fn store_cached(dir: &Path, pf: &PartialFractionForm) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(&pf.to_document())?;
    std::fs::write(cache_path(dir, pf.n), text)?;
    Ok(())
}
