//! Exact rational scalars.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn pow(x: &Scalar, e: usize) -> Scalar {
    if e == 0 {
        return Scalar::one();
    }
    Pow::pow(x, e as u64)
}

/// `x^e` for signed exponents; fails when `x = 0` and `e < 0`.
pub fn powi(x: &Scalar, e: i64) -> Result<Scalar> {
    if e >= 0 {
        return Ok(pow(x, e as usize));
    }
    if x.is_zero() {
        return Err(Error::DivisionByZero(format!("0^{e}")));
    }
    Ok(pow(&x.recip(), (-e) as usize))
}

pub fn sign(even: bool) -> Scalar {
    if even {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Parses `a` or `a/b` with integers `a`, `b`. Decimal notation is rejected.
pub fn parse(text: &str) -> Result<Scalar> {
    let s = text.trim();
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(Error::Parse(format!(
            "`{s}`: scalars must be exact rationals like 1/3, not decimals"
        )));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a rational number")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a rational number")))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero(format!("`{s}`")));
    }
    Ok(Scalar::new(num, den))
}

/// `num/den` in lowest terms, or just `num` for integers.
pub fn format(x: &Scalar) -> String {
    x.to_string()
}

/// Exact square root when `x` is the square of a rational.
pub fn sqrt_exact(x: &Scalar) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Scalar::new(n, d))
    } else {
        None
    }
}

/// True when `t = 1/q` with `q` a power of an odd prime.
pub fn is_inverse_odd_prime_power(t: &Scalar) -> bool {
    if !t.numer().is_one() {
        return false;
    }
    let mut q = t.denom().clone();
    let two = BigInt::from(2);
    if q <= BigInt::one() || q.is_even() {
        return false;
    }
    let mut p = BigInt::from(3);
    while &p * &p <= q {
        if q.is_multiple_of(&p) {
            while q.is_multiple_of(&p) {
                q /= &p;
            }
            return q.is_one();
        }
        p += &two;
    }
    true
}

pub fn in_open_unit_interval(t: &Scalar) -> bool {
    t.is_positive() && t < &Scalar::one()
}

pub fn abs_below_one(t: &Scalar) -> bool {
    t.abs() < Scalar::one()
}
