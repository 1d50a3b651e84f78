//! Exact rational scalars and a few helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

use crate::error::{Error, Result};

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_negative_integer(z: &Rational) -> bool {
    z.is_integer() && z.is_negative()
}

pub fn is_nonnegative_integer(z: &Rational) -> bool {
    z.is_integer() && !z.is_negative()
}

/// Integer value of `z`, if it is an integer that fits in an `i64`.
pub fn to_i64(z: &Rational) -> Option<i64> {
    if z.is_integer() {
        z.numer().to_i64()
    } else {
        None
    }
}

/// Parses `p`, `-p` or `p/q`; whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `p` for integers, `p/q` otherwise.
pub fn fmt_rational(z: &Rational) -> String {
    if z.denom().is_one() {
        z.numer().to_string()
    } else {
        format!("{}/{}", z.numer(), z.denom())
    }
}

pub fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}

pub fn fmt_ivec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
