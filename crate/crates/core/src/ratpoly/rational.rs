//! Helpers around the exact rational backend.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RatPolyError;

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

/// Builds `num/den` from machine integers.
///
/// # Panics
/// Panics when `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, RatPolyError> {
    let t = s.trim();
    let bad = || RatPolyError::Parse(format!("not a rational: {s:?}"));
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for display and sampling.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `k!` as a rational.
pub fn factorial(k: u32) -> Rational {
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= BigInt::from(j);
    }
    Rational::from_integer(acc)
}

/// Positive multiple of `xs` that is a primitive integer vector.
///
/// Returns `None` when every entry is zero.
pub fn primitive_integer_vector(xs: &[Rational]) -> Option<Vec<BigInt>> {
    if xs.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = xs
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = xs
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    Some(ints.into_iter().map(|v| v / &g).collect())
}

/// Positive multiple of `xs` with integer entries and no further rescaling.
///
/// Multiplies by the lcm of denominators only.
pub fn clear_denominators(xs: &[Rational]) -> Vec<BigInt> {
    let lcm = xs
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    xs.iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect()
}
