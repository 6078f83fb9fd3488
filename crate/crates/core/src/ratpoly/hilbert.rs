//! Hilbert polynomial statistics.

use num_traits::{One, Signed};

use super::{factorial, int, RatPoly, RatPolyError, Rational};

/// Derived data of a Hilbert polynomial `P = sum_k a_k n^k / k!` of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertStats {
    dim: u32,
    poly: RatPoly,
    a: Vec<Rational>,
}

impl HilbertStats {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    /// `a_k = k! * [n^k] P`.
    pub fn a(&self, k: u32) -> &Rational {
        &self.a[k as usize]
    }

    /// `a_d`, the multiplicity.
    pub fn rank(&self) -> &Rational {
        &self.a[self.dim as usize]
    }

    /// Reduced polynomial `P / a_d`.
    pub fn reduced(&self) -> RatPoly {
        self.poly.scale(&self.rank().recip())
    }

    /// `mu_hat_i = a_i / a_d` for `0 <= i < d`.
    pub fn slope(&self, i: u32) -> Rational {
        self.a(i) / self.rank()
    }

    /// All slopes `mu_hat_0 .. mu_hat_{d-1}`.
    pub fn slopes(&self) -> Vec<Rational> {
        (0..self.dim).map(|i| self.slope(i)).collect()
    }
}

/// Validates `poly` as a degree-`d` Hilbert polynomial and derives its statistics.
pub fn hilbert_stats(poly: &RatPoly, d: u32) -> Result<HilbertStats, RatPolyError> {
    if let Some(e) = poly.min_exponent().filter(|e| *e < 0) {
        return Err(RatPolyError::NegativeExponent(e));
    }
    if poly.degree() != Some(d as i32) {
        return Err(RatPolyError::DegreeMismatch {
            expected: d,
            found: poly.degree(),
        });
    }
    let a: Vec<Rational> = (0..=d)
        .map(|k| factorial(k) * poly.coeff(k as i32))
        .collect();
    if !a[d as usize].is_positive() {
        return Err(RatPolyError::NonpositiveRank(a[d as usize].to_string()));
    }
    Ok(HilbertStats {
        dim: d,
        poly: poly.clone(),
        a,
    })
}

/// Hilbert polynomial of `O(k)` on projective `d`-space: `binomial(n + k + d, d)`.
pub fn hilbert_line_bundle_projective(d: u32, k: i64) -> RatPoly {
    let mut p = RatPoly::constant(Rational::one());
    for j in 1..=d as i64 {
        p = &p * &RatPoly::from_terms([(1, Rational::one()), (0, int(k + j))]);
    }
    p.scale(&factorial(d).recip())
}
