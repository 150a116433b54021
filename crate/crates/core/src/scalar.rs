//! Numeric backends: `f64` and exact rationals.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational number.
pub type Q = BigRational;

/// Field operations shared by the float and exact backends.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the exact rational backend.
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_q(v: &Q) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    /// `self^e` for `self > 0`; exact backends fail unless the result is rational.
    fn pow_q(&self, e: &Q) -> Result<Self>;
    /// Sign as -1, 0 or 1.
    fn sign(&self) -> i32 {
        if self.is_zero() {
            0
        } else if *self > Self::zero() {
            1
        } else {
            -1
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_q(v: &Q) -> Self {
        q_to_f64(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn pow_q(&self, e: &Q) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::InvalidParameter(format!("power of non-positive base {self}")));
        }
        Ok(self.powf(q_to_f64(e)))
    }
}

impl Scalar for Q {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn from_q(v: &Q) -> Self {
        v.clone()
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn pow_q(&self, e: &Q) -> Result<Self> {
        q_pow(self, e)
    }
}

/// Builds `n/d` as an exact rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Converts a rational to the nearest `f64`.
pub fn q_to_f64(v: &Q) -> f64 {
    ToPrimitive::to_f64(v).unwrap_or_else(|| {
        let n = v.numer().to_f64().unwrap_or(f64::NAN);
        let d = v.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `base^e` for a positive rational base.
pub fn q_pow(base: &Q, e: &Q) -> Result<Q> {
    if !base.is_positive() {
        return Err(Error::InvalidParameter(format!("power of non-positive base {base}")));
    }
    let k = e
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Unsupported(format!("exponent denominator too large in {e}")))?;
    let fail = || Error::NonRationalPower { base: fmt_q(base), exp: fmt_q(e) };
    let rn = exact_root(base.numer(), k).ok_or_else(fail)?;
    let rd = exact_root(base.denom(), k).ok_or_else(fail)?;
    let root = Q::new(rn, rd);
    let p = e
        .numer()
        .to_i32()
        .ok_or_else(|| Error::Unsupported(format!("exponent numerator too large in {e}")))?;
    Ok(num_traits::pow::Pow::pow(&root, p))
}

/// Renders a rational as `"p/q"`.
pub fn fmt_q(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` exactly.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().map_err(|_| bad())? };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Sign of a rational as -1, 0 or 1.
pub fn q_sign(v: &Q) -> i32 {
    Scalar::sign(v)
}
