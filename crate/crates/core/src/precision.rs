//! Working-precision scalars.
//!
//! Two real types are used throughout the crate: `f64` for fast paths and
//! [`f256`] (237-bit significand) wherever cancellation would otherwise
//! destroy the result. The partial-fraction form of `r_n` is the prime
//! example: for `n = 40` the residues sum to `41` in absolute value while
//! their magnitudes reach `1e23`, so double precision loses every digit.

use std::fmt::Debug;
use std::ops::Neg;

use f256::f256;
use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Double-precision complex number.
pub type C64 = Complex<f64>;

/// Extended-precision real.
pub type Ext = f256;

/// Extended-precision complex number.
pub type XComplex = Complex<f256>;

/// Significand bits carried by [`Ext`].
pub const EXTENDED_BITS: u32 = 237;

/// Precision tag for polynomial and rational evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

/// Minimal real-field abstraction shared by the `f64` and `f256` code paths.
pub trait Real:
    Copy + Num + Neg<Output = Self> + PartialOrd + Send + Sync + Debug + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_rational(r: &BigRational) -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    /// Unit roundoff of the type, as an `f64`.
    fn unit_roundoff() -> f64;
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    fn from_rational(r: &BigRational) -> Self {
        // Go through f256 so that huge numerators/denominators do not overflow.
        f256::from_rational(r).to_f64()
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }
}

const F256_EXP_BIAS: i64 = 262_143;
const F256_HI_FRACTION_BITS: u32 = 108;

impl Real for f256 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        f256::from(x)
    }

    fn to_f64(self) -> f64 {
        let (hi, lo) = self.to_bits();
        let negative = hi >> 127 == 1;
        let biased = ((hi >> F256_HI_FRACTION_BITS) & 0x7_ffff) as i64;
        let hi_frac = hi & ((1u128 << F256_HI_FRACTION_BITS) - 1);
        let magnitude = if biased == 0x7_ffff {
            if hi_frac == 0 && lo == 0 {
                f64::INFINITY
            } else {
                f64::NAN
            }
        } else if biased == 0 {
            // subnormal f256 values are far below the f64 range
            0.0
        } else {
            let mantissa = 1.0
                + hi_frac as f64 * 2f64.powi(-(F256_HI_FRACTION_BITS as i32))
                + lo as f64 * 2f64.powi(-236);
            ldexp(mantissa, biased - F256_EXP_BIAS)
        };
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }

    fn from_rational(r: &BigRational) -> Self {
        bigint_to_f256(r.numer()) / bigint_to_f256(r.denom())
    }

    #[inline]
    fn abs(self) -> Self {
        f256::abs(&self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        f256::sqrt(self)
    }

    fn unit_roundoff() -> f64 {
        2f64.powi(-(EXTENDED_BITS as i32))
    }
}

/// `x * 2^e` without intermediate overflow.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Converts a big integer to `f256`, truncating below 236 significant bits.
pub fn bigint_to_f256(value: &BigInt) -> f256 {
    let negative = value.sign() == Sign::Minus;
    let mut magnitude = value.abs();
    let bits = magnitude.bits();
    let mut shift = 0u64;
    if bits > 236 {
        shift = bits - 236;
        magnitude >>= shift;
    }
    let mask: BigInt = (BigInt::one() << 128usize) - 1;
    let lo = (&magnitude & &mask).to_u128().unwrap_or(0);
    let hi = (&magnitude >> 128usize).to_u128().unwrap_or(0);
    let mut out = f256::from(hi).mul_pow2(128) + f256::from(lo);
    if shift > 0 {
        out = out.mul_pow2(shift as u32);
    }
    if negative {
        -out
    } else {
        out
    }
}

/// `x · 2^k` rounded toward zero to an integer (a fixed-point value with `k` fraction bits).
pub fn f256_to_fixed(x: f256, k: u32) -> BigInt {
    let (hi, lo) = x.to_bits();
    let negative = hi >> 127 == 1;
    let biased = ((hi >> F256_HI_FRACTION_BITS) & 0x7_ffff) as i64;
    if biased == 0 {
        return BigInt::zero();
    }
    let hi_frac = hi & ((1u128 << F256_HI_FRACTION_BITS) - 1);
    let significand: BigInt = (BigInt::one() << 236usize) | (BigInt::from(hi_frac) << 128usize) | BigInt::from(lo);
    let shift = biased - F256_EXP_BIAS - 236 + k as i64;
    let magnitude = if shift >= 0 {
        significand << shift as usize
    } else {
        significand >> (-shift) as usize
    };
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

/// Inverse of [`f256_to_fixed`], rounded to the nearest representable `f256`.
pub fn fixed_to_f256(v: &BigInt, k: u32) -> f256 {
    bigint_to_f256(v).div_pow2(k)
}

/// Rounds an extended complex number to double precision.
#[inline]
pub fn to_c64<R: Real>(z: Complex<R>) -> C64 {
    C64::new(z.re.to_f64(), z.im.to_f64())
}

/// Promotes a double-precision complex number (exactly) to precision `R`.
#[inline]
pub fn from_c64<R: Real>(z: C64) -> Complex<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

/// `|z|` in the working precision.
#[inline]
pub fn cabs<R: Real>(z: Complex<R>) -> R {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// `|z|` rounded to `f64`, computed without overflow for extended inputs.
#[inline]
pub fn cabs_f64<R: Real>(z: Complex<R>) -> f64 {
    cabs(z).to_f64()
}

/// Zero of the complex type.
#[inline]
pub fn czero<R: Real>() -> Complex<R> {
    Complex::new(R::zero(), R::zero())
}

/// Stable key for caching by an extended-precision shift value.
pub fn xcomplex_key(z: &XComplex) -> [u128; 4] {
    let (a, b) = z.re.to_bits();
    let (c, d) = z.im.to_bits();
    [a, b, c, d]
}

/// Decimal string that parses back to the identical `f256`.
pub fn ext_to_string(x: Ext) -> String {
    format!("{x}")
}

/// Parses a decimal string produced by [`ext_to_string`].
pub fn ext_from_str(s: &str) -> Option<Ext> {
    f256::try_from(s.trim()).ok()
}

/// Converts a rational to `f64` with correct handling of huge parts.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    <f64 as Real>::from_rational(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn f256_f64_round_trip() {
        for &x in &[1.0, -2.5, 1e-300, 3.0e300, 0.1, -7.25e-5] {
            assert_eq!(f256::from_f64(x).to_f64(), x);
        }
        assert_eq!(f256::zero().to_f64(), 0.0);
    }

    #[test]
    fn huge_rational_conversion() {
        let num = BigInt::from_u64(3).unwrap().pow(400);
        let den = BigInt::from_u64(7).unwrap().pow(300);
        let r = BigRational::new(num, den);
        let expected = 400.0 * 3f64.ln() - 300.0 * 7f64.ln();
        let got = rational_to_f64(&r).ln();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn one_third_is_extended_accurate() {
        let third = f256::from_rational(&BigRational::new(1.into(), 3.into()));
        let residual = third * f256::from(3.0) - f256::one();
        assert!(residual.abs().to_f64() < 1e-70);
    }

    #[test]
    fn decimal_round_trip() {
        let x = f256::from_rational(&BigRational::new(22.into(), 7.into()));
        assert_eq!(ext_from_str(&ext_to_string(x)).unwrap(), x);
    }
}
