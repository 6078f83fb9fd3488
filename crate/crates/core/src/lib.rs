//! Exact numerical invariants, canonical filtrations and pair stability for
//! objects modelled by a finite lattice of subobjects with Hilbert polynomials.
//!
//! Everything is computed over exact rationals; the invariant `nu` is kept as
//! a pair `(L, b)` meaning `L / sqrt(b)` and compared without floating point.

pub mod ratpoly;
pub mod canonical;
pub mod invariant;
pub mod oracle;
pub mod pairs;
pub mod sheafmodel;
