//! Scalar abstraction for the exact kernels.
//!
//! All core math is generic over [`Scalar`], a num-traits bundle satisfied by
//! `BigRational` (the intended exact field, aliased as [`Rat`]) and by `f64`
//! for quick approximate experiments. Everything in the crate that asserts
//! exact identities is meant to run over [`Rat`].

use num::bigint::Sign;
use num::traits::{FromPrimitive, Num, Signed};
use num::{BigInt, BigRational, BigUint, ToPrimitive};
use std::fmt::{Debug, Display};

/// Field-like scalar with sign information and integer embedding.
pub trait Scalar: Num + Signed + PartialOrd + FromPrimitive + Clone + Debug + Display {}

impl<T> Scalar for T where T: Num + Signed + PartialOrd + FromPrimitive + Clone + Debug + Display {}

/// The exact rational scalar used by the CLI and the acceptance suite.
pub type Rat = BigRational;

/// Embed an `i64`.
pub fn int<S: Scalar>(n: i64) -> S {
    S::from_i64(n).expect("integer embeds into scalar")
}

/// Exact `n/d`.
pub fn ratio<S: Scalar>(n: i64, d: i64) -> S {
    int::<S>(n) / int::<S>(d)
}

/// Integer power by binary exponentiation; negative exponents via exact
/// division.
pub fn powi<S: Scalar>(base: &S, exp: i64) -> S {
    if exp == 0 {
        return S::one();
    }
    let mut acc = S::one();
    let mut square = base.clone();
    let mut e = exp.unsigned_abs();
    loop {
        if e & 1 == 1 {
            acc = acc * square.clone();
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        square = square.clone() * square;
    }
    if exp < 0 {
        S::one() / acc
    } else {
        acc
    }
}

/// Render an exact rational as a decimal string with `digits` fractional digits
/// (truncated toward zero). Presentation only; the exact value stays rational.
pub fn decimal_string(x: &Rat, digits: usize) -> String {
    let sign = if x.numer().sign() == Sign::Minus { "-" } else { "" };
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    let int_part = &num / &den;
    let mut rem = &num % &den;
    let mut frac = String::with_capacity(digits);
    let ten = BigUint::from(10u32);
    for _ in 0..digits {
        rem *= &ten;
        frac.push_str(&(&rem / &den).to_string());
        rem %= &den;
    }
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Parse an exact rational from `num` or `num/den`.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = t.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

/// Exact rational to f64, for display hints only.
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
