//! Exact representation of `L / sqrt(b)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed};

use super::{format_rational, to_f64, RatPoly, RatPolyError, Rational};

/// The real-coefficient Laurent polynomial `L / sqrt(b)` with `b > 0`.
///
/// Equality and ordering are by value in the eventual order, so
/// `(2n, 4)` equals `(n, 1)`.
#[derive(Clone)]
pub struct NuValue {
    numerator: RatPoly,
    norm: Rational,
}

impl NuValue {
    pub fn new(numerator: RatPoly, norm: Rational) -> Result<Self, RatPolyError> {
        if !norm.is_positive() {
            return Err(RatPolyError::NonpositiveNorm(format_rational(&norm)));
        }
        Ok(Self { numerator, norm })
    }

    pub fn zero() -> Self {
        Self {
            numerator: RatPoly::zero(),
            norm: Rational::one(),
        }
    }

    /// The numerator `L`.
    pub fn numerator(&self) -> &RatPoly {
        &self.numerator
    }

    /// The squared norm `b`.
    pub fn norm_sq(&self) -> &Rational {
        &self.norm
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Eventual sign: -1, 0 or 1.
    pub fn sign(&self) -> i8 {
        self.numerator.eventual_sign()
    }

    /// Coefficient of `n^e` as a scalar `NuValue`.
    pub fn coefficient(&self, e: i32) -> NuValue {
        NuValue {
            numerator: RatPoly::constant(self.numerator.coeff(e)),
            norm: self.norm.clone(),
        }
    }

    /// Exact square of the coefficient of `n^e`, with its sign.
    pub fn coefficient_signed_square(&self, e: i32) -> Rational {
        let c = self.numerator.coeff(e);
        let sq = &c * &c / &self.norm;
        if c.is_negative() {
            -sq
        } else {
            sq
        }
    }

    /// Decimal coefficients `(exponent, c / sqrt(b))`, highest first.
    pub fn approx_coefficients(&self) -> Vec<(i32, f64)> {
        let s = to_f64(&self.norm).sqrt();
        self.numerator
            .terms()
            .rev()
            .map(|(e, c)| (e, to_f64(c) / s))
            .collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numerator.eval_f64(x) / to_f64(&self.norm).sqrt()
    }
}

fn sign_of(c: &Rational) -> i8 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

/// Compares `Lx/sqrt(bx)` with `Ly/sqrt(by)` in the eventual order.
pub fn nu_compare(x: &NuValue, y: &NuValue) -> Ordering {
    let mut exps: Vec<i32> = x
        .numerator
        .terms()
        .map(|(e, _)| e)
        .chain(y.numerator.terms().map(|(e, _)| e))
        .collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.dedup();
    for e in exps {
        let cx = x.numerator.coeff(e);
        let cy = y.numerator.coeff(e);
        let (sx, sy) = (sign_of(&cx), sign_of(&cy));
        if sx != sy {
            return sx.cmp(&sy);
        }
        if sx == 0 {
            continue;
        }
        let lhs = &cx * &cx * &y.norm;
        let rhs = &cy * &cy * &x.norm;
        let ord = if sx > 0 { lhs.cmp(&rhs) } else { rhs.cmp(&lhs) };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

impl PartialEq for NuValue {
    fn eq(&self, other: &Self) -> bool {
        nu_compare(self, other) == Ordering::Equal
    }
}

impl Eq for NuValue {}

impl PartialOrd for NuValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NuValue {
    fn cmp(&self, other: &Self) -> Ordering {
        nu_compare(self, other)
    }
}

impl fmt::Display for NuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.norm.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / sqrt({})", self.numerator, format_rational(&self.norm))
        }
    }
}

impl fmt::Debug for NuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NuValue({self})")
    }
}

impl Default for NuValue {
    fn default() -> Self {
        Self::zero()
    }
}
