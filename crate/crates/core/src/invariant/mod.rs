//! The numerical invariant of weighted filtrations and its polytope.
//!
//! For a filtration with graded pieces `gr_k` of weight `w_k` the weight
//! polynomial is `sum_k w_k (pbar(gr_k) - pbar(F)) rk(gr_k)`, the norm is
//! `b = sum_k rk(gr_k) w_k^2`, and `nu = weight / sqrt(b)`.

mod polytope;

use num_traits::Zero;
use thiserror::Error;

use crate::ratpoly::{int, NuValue, RatPoly, Rational};
use crate::sheafmodel::{ModelError, WeightedFiltration};

pub use polytope::{convex_hull, polytope, polytope_subset, Point, Polytope2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("filtration has zero norm")]
    DegenerateFiltration,
    #[error("coefficient index {index} out of range for dimension {dim}")]
    BadIndex { index: u32, dim: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl InvariantError {
    /// Stable variant name for reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::DegenerateFiltration => "DegenerateFiltration",
            Self::BadIndex { .. } => "BadIndex",
            Self::Model(e) => e.name(),
        }
    }
}

/// `P(G) - rk(G) * pbar(F)` for a polynomial `P(G)` of rank `rk(G)`.
fn excess(poly: &RatPoly, rank: &Rational, reduced_top: &RatPoly) -> RatPoly {
    poly - &reduced_top.scale(rank)
}

/// Weight polynomial summed over graded pieces.
pub fn weight_graded(f: &WeightedFiltration) -> RatPoly {
    let lat = f.lattice();
    let pbar = lat.stats(lat.top()).reduced();
    f.base()
        .gradeds()
        .iter()
        .zip(f.weights())
        .map(|(g, &w)| excess(g.poly(), g.rank(), &pbar).scale(&int(w)))
        .sum()
}

/// Weight polynomial summed over the subobjects `F_m` of the Rees family.
///
/// `F_m = G_(k)` for the least `k` with `w_k >= m`, so each deeper chain
/// member contributes once per integer in `(w_{k-1}, w_k]`; the remaining
/// `F_m` are `F` or `0` and contribute nothing.
pub fn weight_subobject(f: &WeightedFiltration) -> RatPoly {
    let lat = f.lattice();
    let pbar = lat.stats(lat.top()).reduced();
    let w = f.weights();
    f.chain()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &g)| {
            let multiplicity = w[k] - w[k - 1];
            excess(lat.poly(g), &lat.rank(g), &pbar).scale(&int(multiplicity))
        })
        .sum()
}

/// `b = sum_k rk(gr_k) w_k^2`.
pub fn b_norm(f: &WeightedFiltration) -> Result<Rational, InvariantError> {
    let b: Rational = f
        .base()
        .gradeds()
        .iter()
        .zip(f.weights())
        .map(|(g, &w)| g.rank() * int(w * w))
        .sum();
    if b.is_zero() {
        Err(InvariantError::DegenerateFiltration)
    } else {
        Ok(b)
    }
}

/// `nu(f)`; the trivial filtration has value zero.
pub fn nu(f: &WeightedFiltration) -> NuValue {
    match b_norm(f) {
        Ok(b) => NuValue::new(weight_graded(f), b).expect("norm is positive"),
        Err(_) => NuValue::zero(),
    }
}

/// Numerator of the pair invariant:
/// `sum_k w_k (pbar(gr_k) - delta/rk(F) - pbar(F)) rk(gr_k)`.
pub fn nu_delta_numerator(f: &WeightedFiltration, delta: &RatPoly) -> RatPoly {
    let lat = f.lattice();
    let top = lat.stats(lat.top());
    let shifted = &top.reduced() + &delta.scale(&top.rank().recip());
    f.base()
        .gradeds()
        .iter()
        .zip(f.weights())
        .map(|(g, &w)| excess(g.poly(), g.rank(), &shifted).scale(&int(w)))
        .sum()
}

/// `nu^(delta)(f)`; the trivial filtration has value zero.
pub fn nu_delta(f: &WeightedFiltration, delta: &RatPoly) -> NuValue {
    match b_norm(f) {
        Ok(b) => NuValue::new(nu_delta_numerator(f, delta), b).expect("norm is positive"),
        Err(_) => NuValue::zero(),
    }
}
