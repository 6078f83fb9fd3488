//! Finite lattices of subobjects, filtrations by their members, and pairs.
//!
//! A lattice stands in for the subobjects of one fixed object `F` that matter
//! for a computation. Each member carries its Hilbert polynomial; the order is
//! the transitive closure of the declared inclusions together with
//! `zero <= x <= top` for every member `x`.

mod file;
mod filtration;
mod lattice;

use thiserror::Error;

pub use file::{parse_lattice_file, write_lattice_file, LatticeDocument};
pub use filtration::{
    graded_pieces, make_filtration, make_pair_filtration, PairObject, UnweightedFiltration,
    WeightedFiltration,
};
pub use lattice::{validate_lattice, LatticeSpec, MemberId, ObjectClass, SubobjectLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("member id {0:?} declared twice")]
    DuplicateMember(String),
    #[error("unknown member id {0:?}")]
    UnknownMember(String),
    #[error("relation closure has a cycle through {0:?} and {1:?}")]
    CycleInRelation(String, String),
    #[error("quotient {sup:?}/{sub:?} is not pure of the ambient dimension")]
    QuotientNotPure { sub: String, sup: String },
    #[error("rank does not increase from {sub:?} to {sup:?}")]
    RankNotIncreasing { sub: String, sup: String },
    #[error("cannot identify top and zero: {0}")]
    MissingTopOrZero(String),
    #[error("{sub:?} is not a proper subobject of {sup:?}")]
    NotComparable { sub: String, sup: String },
    #[error("chain is not strictly decreasing from top through nonzero members: {0}")]
    ChainNotIncreasing(String),
    #[error("weights must be strictly increasing with depth: {0:?}")]
    WeightsNotIncreasing(Vec<i64>),
    #[error("chain has {chain} members but {weights} weights were given")]
    LengthMismatch { chain: usize, weights: usize },
    #[error("pair constraint fails: weight {weight} at step {index} holding the image is negative")]
    PairConstraintViolated { index: usize, weight: i64 },
    #[error("image member {0:?} must be a nonzero member")]
    InvalidBetaImage(String),
    #[error("weight does not fit in 64 bits")]
    WeightOverflow,
    #[error("malformed lattice document: {0}")]
    Parse(String),
}

impl ModelError {
    /// Stable variant name for reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::DuplicateMember(_) => "DuplicateMember",
            Self::UnknownMember(_) => "UnknownMember",
            Self::CycleInRelation(..) => "CycleInRelation",
            Self::QuotientNotPure { .. } => "QuotientNotPure",
            Self::RankNotIncreasing { .. } => "RankNotIncreasing",
            Self::MissingTopOrZero(_) => "MissingTopOrZero",
            Self::NotComparable { .. } => "NotComparable",
            Self::ChainNotIncreasing(_) => "ChainNotIncreasing",
            Self::WeightsNotIncreasing(_) => "WeightsNotIncreasing",
            Self::LengthMismatch { .. } => "LengthMismatch",
            Self::PairConstraintViolated { .. } => "PairConstraintViolated",
            Self::InvalidBetaImage(_) => "InvalidBetaImage",
            Self::WeightOverflow => "WeightOverflow",
            Self::Parse(_) => "Parse",
        }
    }
}
