use std::fmt;
use std::sync::Arc;

use super::{MemberId, ModelError, SubobjectLattice};
use crate::ratpoly::HilbertStats;

/// Chain `top = G_(0) > G_(1) > ... > G_(q) > 0` of nonzero members.
#[derive(Clone)]
pub struct UnweightedFiltration {
    lattice: Arc<SubobjectLattice>,
    chain: Vec<MemberId>,
}

impl UnweightedFiltration {
    pub fn new(lattice: &Arc<SubobjectLattice>, chain: Vec<MemberId>) -> Result<Self, ModelError> {
        let describe = || {
            chain
                .iter()
                .map(|&m| lattice.label(m))
                .collect::<Vec<_>>()
                .join(" > ")
        };
        if chain.first() != Some(&lattice.top()) {
            return Err(ModelError::ChainNotIncreasing(format!(
                "chain must start at top, got [{}]",
                describe()
            )));
        }
        if chain.contains(&lattice.zero()) {
            return Err(ModelError::ChainNotIncreasing(format!(
                "zero member in [{}]",
                describe()
            )));
        }
        if chain.windows(2).any(|w| !lattice.lt(w[1], w[0])) {
            return Err(ModelError::ChainNotIncreasing(format!("[{}]", describe())));
        }
        Ok(Self {
            lattice: Arc::clone(lattice),
            chain,
        })
    }

    /// Chain given by member labels, top first.
    pub fn from_labels(lattice: &Arc<SubobjectLattice>, labels: &[&str]) -> Result<Self, ModelError> {
        let chain = labels
            .iter()
            .map(|l| lattice.lookup(l))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lattice, chain)
    }

    /// The one-step chain `(top)`.
    pub fn trivial(lattice: &Arc<SubobjectLattice>) -> Self {
        Self {
            lattice: Arc::clone(lattice),
            chain: vec![lattice.top()],
        }
    }

    pub fn lattice(&self) -> &Arc<SubobjectLattice> {
        &self.lattice
    }

    pub fn chain(&self) -> &[MemberId] {
        &self.chain
    }

    /// Number of chain members `q + 1`, equal to the number of graded pieces.
    pub fn steps(&self) -> usize {
        self.chain.len()
    }

    /// `G_(k+1)`, or zero below the deepest member.
    pub fn below(&self, k: usize) -> MemberId {
        self.chain.get(k + 1).copied().unwrap_or(self.lattice.zero())
    }

    /// Statistics of `G_(k) / G_(k+1)`.
    pub fn graded(&self, k: usize) -> HilbertStats {
        let top = self.chain[k];
        let below = self.below(k);
        if below == self.lattice.zero() {
            self.lattice.stats(top).clone()
        } else {
            self.lattice
                .quotient_stats(below, top)
                .expect("validated chain has pure quotients")
        }
    }

    /// Graded pieces in chain order, outermost first.
    pub fn gradeds(&self) -> Vec<HilbertStats> {
        (0..self.steps()).map(|k| self.graded(k)).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.chain.iter().map(|&m| self.lattice.label(m)).collect()
    }

    pub fn with_weights(self, weights: Vec<i64>) -> Result<WeightedFiltration, ModelError> {
        if weights.len() != self.chain.len() {
            return Err(ModelError::LengthMismatch {
                chain: self.chain.len(),
                weights: weights.len(),
            });
        }
        if weights.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::WeightsNotIncreasing(weights));
        }
        Ok(WeightedFiltration { base: self, weights })
    }
}

impl PartialEq for UnweightedFiltration {
    fn eq(&self, other: &Self) -> bool {
        self.chain == other.chain
            && (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
    }
}

impl Eq for UnweightedFiltration {}

impl fmt::Debug for UnweightedFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.labels().join(" > "))
    }
}

/// Chain with strictly increasing integer weights `w_0 < ... < w_q`.
///
/// `w_k` is the weight of `G_(k) / G_(k+1)`; deeper pieces weigh more.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedFiltration {
    base: UnweightedFiltration,
    weights: Vec<i64>,
}

impl WeightedFiltration {
    pub fn base(&self) -> &UnweightedFiltration {
        &self.base
    }

    pub fn lattice(&self) -> &Arc<SubobjectLattice> {
        self.base.lattice()
    }

    pub fn chain(&self) -> &[MemberId] {
        self.base.chain()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn steps(&self) -> usize {
        self.base.steps()
    }

    /// True for the one-step chain with weight zero.
    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }
}

impl fmt::Debug for WeightedFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} weights {:?}", self.base, self.weights)
    }
}

/// Builds a weighted filtration from chain members and weights.
pub fn make_filtration(
    lattice: &Arc<SubobjectLattice>,
    chain: &[MemberId],
    weights: &[i64],
) -> Result<WeightedFiltration, ModelError> {
    UnweightedFiltration::new(lattice, chain.to_vec())?.with_weights(weights.to_vec())
}

/// Like [`make_filtration`], also enforcing the pair constraint.
pub fn make_pair_filtration(
    pair: &PairObject,
    chain: &[MemberId],
    weights: &[i64],
) -> Result<WeightedFiltration, ModelError> {
    let f = make_filtration(&pair.lattice, chain, weights)?;
    pair.check(&f)?;
    Ok(f)
}

/// Weight and statistics of each graded piece, deepest first.
pub fn graded_pieces(f: &WeightedFiltration) -> Vec<(i64, HilbertStats)> {
    (0..f.steps())
        .rev()
        .map(|k| (f.weights[k], f.base.graded(k)))
        .collect()
}

/// An object together with the saturated image of its section map.
///
/// `beta_image = None` encodes the zero map.
#[derive(Clone, PartialEq, Eq)]
pub struct PairObject {
    lattice: Arc<SubobjectLattice>,
    beta_image: Option<MemberId>,
}

impl PairObject {
    pub fn new(lattice: &Arc<SubobjectLattice>, beta_image: Option<MemberId>) -> Result<Self, ModelError> {
        if let Some(b) = beta_image {
            if b.0 >= lattice.len() {
                return Err(ModelError::InvalidBetaImage(b.to_string()));
            }
            if b == lattice.zero() {
                return Err(ModelError::InvalidBetaImage(lattice.label(b).to_string()));
            }
        }
        Ok(Self {
            lattice: Arc::clone(lattice),
            beta_image,
        })
    }

    pub fn lattice(&self) -> &Arc<SubobjectLattice> {
        &self.lattice
    }

    pub fn beta_image(&self) -> Option<MemberId> {
        self.beta_image
    }

    /// Largest `j` with the image inside `G_(j)`; `None` when the map is zero.
    pub fn constraint_index(&self, chain: &[MemberId]) -> Option<usize> {
        let b = self.beta_image?;
        chain.iter().rposition(|&g| self.lattice.leq(b, g))
    }

    /// Whether `weights` on `chain` satisfy `w_j >= 0` at the constraint index.
    pub fn admits(&self, chain: &[MemberId], weights: &[i64]) -> bool {
        self.constraint_index(chain).map_or(true, |j| weights[j] >= 0)
    }

    pub fn check(&self, f: &WeightedFiltration) -> Result<(), ModelError> {
        match self.constraint_index(f.chain()) {
            Some(j) if f.weights()[j] < 0 => Err(ModelError::PairConstraintViolated {
                index: j,
                weight: f.weights()[j],
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Debug for PairObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.beta_image.map(|b| self.lattice.label(b).to_string());
        write!(f, "PairObject(top {:?}, image {:?})", self.lattice.label(self.lattice.top()), b)
    }
}
