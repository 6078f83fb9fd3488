//! Exact Laurent polynomials in one variable `n` over the rationals.
//!
//! Polynomials are kept in canonical form (no zero coefficients), so
//! structural equality is value equality. Ordering is the eventual order:
//! `p < q` iff `p(n) < q(n)` for all sufficiently large `n`.

mod hilbert;
mod nu;
mod rational;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use hilbert::{hilbert_line_bundle_projective, hilbert_stats, HilbertStats};
pub use nu::{nu_compare, NuValue};
pub use rational::{
    clear_denominators, factorial, format_rational, int, parse_rational, primitive_integer_vector,
    rat, to_f64, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatPolyError {
    #[error("polynomial has degree {found:?}, expected exact degree {expected}")]
    DegreeMismatch { expected: u32, found: Option<i32> },
    #[error("rank {0} is not positive")]
    NonpositiveRank(String),
    #[error("negative exponent n^{0} not allowed in a Hilbert polynomial")]
    NegativeExponent(i32),
    #[error("NuValue needs a positive norm, got {0}")]
    NonpositiveNorm(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl RatPolyError {
    /// Stable variant name for reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::DegreeMismatch { .. } => "DegreeMismatch",
            Self::NonpositiveRank(_) => "NonpositiveRank",
            Self::NegativeExponent(_) => "NegativeExponent",
            Self::NonpositiveNorm(_) => "NonpositiveNorm",
            Self::Parse(_) => "Parse",
        }
    }
}

/// Finite Laurent polynomial `sum c_k n^k`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: BTreeMap<i32, Rational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * n^e`.
    pub fn monomial(c: Rational, e: i32) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.coeffs.insert(e, c);
        }
        p
    }

    /// The variable `n`.
    pub fn n() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Ascending integer coefficients `c_0 + c_1 n + ...`.
    pub fn from_ints(cs: &[i64]) -> Self {
        Self::from_terms(cs.iter().enumerate().map(|(k, &c)| (k as i32, int(c))))
    }

    fn add_term(&mut self, e: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent, `None` for the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest exponent present.
    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, e: i32) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading coefficient, zero for the zero polynomial.
    pub fn leading_coeff(&self) -> Rational {
        self.coeffs
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Sign of the eventual value: -1, 0 or 1.
    pub fn eventual_sign(&self) -> i8 {
        let c = self.leading_coeff();
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.coeffs {
            let mut pw = Rational::one();
            for _ in 0..e.unsigned_abs() {
                pw *= x;
            }
            if *e < 0 {
                pw = pw.recip();
            }
            acc += c * pw;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| to_f64(c) * x.powi(*e))
            .sum()
    }

    /// Parses literals such as `n^2 - (3/2)n + 1`, `2n`, `-n^-1`, `1/2`.
    pub fn parse(s: &str) -> Result<Self, RatPolyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(RatPolyError::Parse("empty polynomial".into()));
        }
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let splits = (ch == '+' || ch == '-') && !matches!(prev, None | Some('^'));
            if splits {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        pieces.push(cur);
        let mut p = Self::zero();
        for piece in pieces {
            let (e, c) = parse_term(&piece)?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

fn parse_term(t: &str) -> Result<(i32, Rational), RatPolyError> {
    let bad = || RatPolyError::Parse(format!("bad term {t:?}"));
    let (sign, body) = match t.as_bytes().first() {
        Some(b'+') => (1, &t[1..]),
        Some(b'-') => (-1, &t[1..]),
        _ => (1, t),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (coef_part, var_part) = match body.find('n') {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let coef_part = coef_part.strip_suffix('*').unwrap_or(coef_part);
    let coef_part = coef_part
        .strip_prefix('(')
        .and_then(|c| c.strip_suffix(')'))
        .unwrap_or(coef_part);
    let c = if coef_part.is_empty() {
        if var_part.is_none() {
            return Err(bad());
        }
        Rational::one()
    } else {
        parse_rational(coef_part)?
    };
    let e = match var_part {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|x| x.parse::<i32>().ok())
            .ok_or_else(bad)?,
    };
    Ok((e, if sign < 0 { -c } else { c }))
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let coef = if a.denom().is_one() {
                a.numer().to_string()
            } else {
                format!("({})", format_rational(&a))
            };
            match *e {
                0 => f.write_str(&format_rational(&a))?,
                _ => {
                    if !a.is_one() {
                        f.write_str(&coef)?;
                    }
                    if *e == 1 {
                        f.write_str("n")?;
                    } else {
                        write!(f, "n^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

/// Eventual comparison: the sign of the leading coefficient of `p - q`.
pub fn eventual_compare(p: &RatPoly, q: &RatPoly) -> Ordering {
    (p - q).eventual_sign().cmp(&0)
}

impl Ord for RatPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        eventual_compare(self, other)
    }
}

impl PartialOrd for RatPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul<&RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        let mut out = RatPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: &RatPoly) -> RatPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<RatPoly> for &RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl std::iter::Sum for RatPoly {
    fn sum<I: Iterator<Item = RatPoly>>(iter: I) -> Self {
        iter.fold(RatPoly::zero(), |a, b| a + b)
    }
}
