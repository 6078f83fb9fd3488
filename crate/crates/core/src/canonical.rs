//! Semistability, Harder–Narasimhan filtrations, the canonical maximizer of
//! `nu`, and the step deletion that makes filtrations convex.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::invariant::nu;
use crate::ratpoly::{clear_denominators, int, primitive_integer_vector, HilbertStats, RatPoly, Rational};
use crate::sheafmodel::{MemberId, ModelError, SubobjectLattice, UnweightedFiltration, WeightedFiltration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("HN step {step} is ambiguous between incomparable members {first:?} and {second:?}")]
    AmbiguousHN { step: usize, first: String, second: String },
    #[error("greedy chain is not a Harder–Narasimhan filtration: {0}")]
    InvalidHN(String),
    #[error("object is semistable; there is no destabilizing filtration")]
    ObjectSemistable,
    #[error("deletion precondition fails: {0}")]
    PreconditionFailed(String),
    #[error("filtration has negative nu")]
    NegativeNu,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl CanonicalError {
    /// Stable variant name for reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::AmbiguousHN { .. } => "AmbiguousHN",
            Self::InvalidHN(_) => "InvalidHN",
            Self::ObjectSemistable => "ObjectSemistable",
            Self::PreconditionFailed(_) => "PreconditionFailed",
            Self::NegativeNu => "NegativeNu",
            Self::Model(e) => e.name(),
        }
    }
}

/// Outcome of the Gieseker semistability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemistabilityVerdict {
    pub semistable: bool,
    /// A proper member of maximal reduced polynomial when destabilizing.
    pub witness: Option<MemberId>,
}

/// Semistable iff no proper nonzero member has larger reduced polynomial.
pub fn is_semistable(lat: &SubobjectLattice) -> SemistabilityVerdict {
    let pbar_top = lat.stats(lat.top()).reduced();
    let best = lat
        .proper_members()
        .into_iter()
        .map(|m| (lat.stats(m).reduced(), lat.rank(m), m))
        .max_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(b.2.cmp(&a.2)));
    match best {
        Some((p, _, m)) if p > pbar_top => SemistabilityVerdict {
            semistable: false,
            witness: Some(m),
        },
        _ => SemistabilityVerdict {
            semistable: true,
            witness: None,
        },
    }
}

/// Harder–Narasimhan chain, top first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnData {
    pub filtration: UnweightedFiltration,
}

impl HnData {
    pub fn gradeds(&self) -> Vec<HilbertStats> {
        self.filtration.gradeds()
    }

    pub fn is_trivial(&self) -> bool {
        self.filtration.steps() == 1
    }
}

/// Greedy HN filtration: repeatedly take the member above the current one
/// whose quotient has the largest reduced polynomial, preferring larger rank.
pub fn hn_filtration(lat: &Arc<SubobjectLattice>) -> Result<HnData, CanonicalError> {
    let mut current = lat.zero();
    let mut bottom_up = Vec::new();
    while current != lat.top() {
        let base = lat.poly(current).clone();
        let base_rank = lat.rank(current);
        let mut best: Option<(RatPoly, Rational, MemberId)> = None;
        let mut tie: Option<MemberId> = None;
        for m in lat.ids().filter(|&m| lat.lt(current, m)) {
            let r = lat.rank(m) - &base_rank;
            let pbar = (lat.poly(m) - &base).scale(&r.recip());
            let key = (pbar, lat.rank(m));
            match &best {
                Some((bp, br, _)) => match (&key.0, &key.1).cmp(&(bp, br)) {
                    Ordering::Greater => {
                        best = Some((key.0, key.1, m));
                        tie = None;
                    }
                    Ordering::Equal => tie = Some(m),
                    Ordering::Less => {}
                },
                None => best = Some((key.0, key.1, m)),
            }
        }
        let (_, _, chosen) = best.expect("top lies strictly above every other member");
        if let Some(other) = tie {
            return Err(CanonicalError::AmbiguousHN {
                step: bottom_up.len(),
                first: lat.label(chosen).to_string(),
                second: lat.label(other).to_string(),
            });
        }
        bottom_up.push(chosen);
        current = chosen;
    }
    bottom_up.reverse();
    let filtration = UnweightedFiltration::new(lat, bottom_up)?;
    let gr = filtration.gradeds();
    for k in 1..gr.len() {
        if gr[k].reduced() <= gr[k - 1].reduced() {
            return Err(CanonicalError::InvalidHN(format!(
                "graded reduced polynomials do not increase at step {k}"
            )));
        }
    }
    Ok(HnData { filtration })
}

/// The merged HN filtration weighted by `mu_hat_i` at the leading index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTermData {
    /// Largest `i` where the HN gradeds disagree in `mu_hat_i`.
    pub index: u32,
    pub filtration: WeightedFiltration,
    /// `mu_hat_i(gr) - mu_hat_i(F)` before integer scaling, per merged step.
    pub slope_gaps: Vec<Rational>,
}

/// Merges HN steps with equal `mu_hat_i` and weights them by the slope gap.
pub fn leading_term(hn: &HnData) -> Result<LeadingTermData, CanonicalError> {
    if hn.is_trivial() {
        return Err(CanonicalError::ObjectSemistable);
    }
    let lat = hn.filtration.lattice();
    let gr = hn.gradeds();
    let index = (0..lat.dimension())
        .rev()
        .find(|&i| gr.iter().any(|g| g.slope(i) != gr[0].slope(i)))
        .ok_or_else(|| CanonicalError::InvalidHN("graded pieces share all slopes".into()))?;
    let chain: Vec<MemberId> = (0..gr.len())
        .filter(|&k| k == 0 || gr[k - 1].slope(index) < gr[k].slope(index))
        .map(|k| hn.filtration.chain()[k])
        .collect();
    let merged = UnweightedFiltration::new(lat, chain)?;
    let top_slope = lat.stats(lat.top()).slope(index);
    let slope_gaps: Vec<Rational> = merged
        .gradeds()
        .iter()
        .map(|g| g.slope(index) - &top_slope)
        .collect();
    let weights = primitive_integer_vector(&slope_gaps)
        .ok_or(CanonicalError::ObjectSemistable)?
        .iter()
        .map(|w| w.to_i64().ok_or(ModelError::WeightOverflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LeadingTermData {
        index,
        filtration: merged.with_weights(weights)?,
        slope_gaps,
    })
}

/// The canonical `nu`-maximizing filtration of an unstable object.
pub fn canonical_filtration(lat: &Arc<SubobjectLattice>) -> Result<WeightedFiltration, CanonicalError> {
    Ok(leading_term(&hn_filtration(lat)?)?.filtration)
}

/// Gradeds have weakly increasing reduced polynomials with depth.
pub fn is_convex(f: &UnweightedFiltration) -> bool {
    let gr = f.gradeds();
    gr.windows(2).all(|w| w[0].reduced() <= w[1].reduced())
}

/// Removes `G_(i+1)`, reweighting so that `nu` does not decrease.
///
/// With `R_k = rk(gr_k)` and `R = R_i + R_{i+1}`, the merged step gets
/// `R_i w_i + R_{i+1} w_{i+1}` and every other step `R w_l`.
pub fn delete_step(f: &WeightedFiltration, i: usize) -> Result<WeightedFiltration, CanonicalError> {
    if i + 1 >= f.steps() {
        return Err(CanonicalError::PreconditionFailed(format!(
            "step {} does not exist in a chain of {} members",
            i + 1,
            f.steps()
        )));
    }
    if nu(f).sign() < 0 {
        return Err(CanonicalError::PreconditionFailed("nu is negative".into()));
    }
    let gi = f.base().graded(i);
    let gj = f.base().graded(i + 1);
    if gj.reduced() > gi.reduced() {
        return Err(CanonicalError::PreconditionFailed(format!(
            "graded {} has larger reduced polynomial than graded {i}",
            i + 1
        )));
    }
    let (ri, rj) = (gi.rank().clone(), gj.rank().clone());
    let total = &ri + &rj;
    let w = f.weights();
    let mut new_w: Vec<Rational> = Vec::with_capacity(w.len() - 1);
    for (l, &wl) in w.iter().enumerate() {
        if l == i {
            new_w.push(&ri * int(wl) + &rj * int(w[i + 1]));
        } else if l != i + 1 {
            new_w.push(&total * int(wl));
        }
    }
    let weights = clear_denominators(&new_w)
        .iter()
        .map(|x| x.to_i64().ok_or(ModelError::WeightOverflow))
        .collect::<Result<Vec<_>, _>>()?;
    let mut chain = f.chain().to_vec();
    chain.remove(i + 1);
    Ok(UnweightedFiltration::new(f.lattice(), chain)?.with_weights(weights)?)
}

/// Deepest index `i` with `pbar(gr_{i+1}) < pbar(gr_i)`.
fn deepest_violation(f: &UnweightedFiltration) -> Option<usize> {
    let gr = f.gradeds();
    (0..gr.len().saturating_sub(1))
        .rev()
        .find(|&i| gr[i + 1].reduced() < gr[i].reduced())
}

/// Every intermediate filtration of [`convexify`], starting with `f`.
pub fn convexify_trace(f: &WeightedFiltration) -> Result<Vec<WeightedFiltration>, CanonicalError> {
    if nu(f).sign() < 0 {
        return Err(CanonicalError::NegativeNu);
    }
    let mut trace = vec![f.clone()];
    while let Some(i) = deepest_violation(trace.last().unwrap().base()) {
        let next = delete_step(trace.last().unwrap(), i)?;
        trace.push(next);
    }
    Ok(trace)
}

/// Deletes violating steps, deepest first, until the filtration is convex.
pub fn convexify(f: &WeightedFiltration) -> Result<WeightedFiltration, CanonicalError> {
    Ok(convexify_trace(f)?.pop().expect("trace is nonempty"))
}
