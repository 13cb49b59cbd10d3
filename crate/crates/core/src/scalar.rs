//! Exact rational scalars.
//!
//! Every algebraic quantity in the crate lives in [`Scalar`]; floating point is
//! confined to the Monte-Carlo weight estimator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^k` as a scalar.
pub fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

/// Parses `"3"`, `"-1/2"`, `" 7 / 4 "`.
pub fn parse(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational number: {text:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational number: {text:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Scalar::new(n, d))
}

/// `n!` as a scalar.
pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Scalar::from_integer(acc)
}

pub fn binomial(n: usize, k: usize) -> Scalar {
    if k > n {
        return zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn to_f64(q: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Renders `q` as `n` or `n/d`.
pub fn render(q: &Scalar) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_negative(q: &Scalar) -> bool {
    q.is_negative()
}
