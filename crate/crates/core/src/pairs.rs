//! Stability of pairs `(F, beta)` for a stability polynomial `delta`.
//!
//! The section map is recorded only through the saturation of its image in
//! the lattice. For `deg(delta) >= d` the answer depends only on that image;
//! for `deg(delta) < d` the criterion compares reduced polynomials shifted by
//! `delta / rank`.

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::canonical::is_semistable;
use crate::invariant::nu_delta;
use crate::oracle::{brute_force_max, enumerate_chains};
use crate::ratpoly::{primitive_integer_vector, NuValue, RatPoly, Rational};
use crate::sheafmodel::{MemberId, ModelError, PairObject, UnweightedFiltration, WeightedFiltration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("pair is semistable for this delta")]
    Semistable,
    #[error("delta has degree {degree:?}, below the dimension {dim}")]
    DegreeTooLow { degree: Option<i32>, dim: u32 },
    #[error("top coefficient of nu^(delta) has no positive direction on this chain")]
    FlatObjective,
    #[error("no destabilizing filtration with weights bounded by {0}")]
    OracleInconclusive(u32),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl PairError {
    /// Stable variant name for reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Semistable => "Semistable",
            Self::DegreeTooLow { .. } => "DegreeTooLow",
            Self::FlatObjective => "FlatObjective",
            Self::OracleInconclusive(_) => "OracleInconclusive",
            Self::Model(e) => e.name(),
        }
    }
}

/// Why a pair is unstable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairWitness {
    /// The section map is zero while `delta > 0`.
    ZeroMap,
    /// `delta < 0`: the one-step filtration of weight one destabilizes.
    NegativeDelta,
    /// A proper member violating the inequality for its case.
    Subobject { member: MemberId, contains_image: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    pub semistable: bool,
    pub witness: Option<PairWitness>,
}

impl PairVerdict {
    fn stable() -> Self {
        Self { semistable: true, witness: None }
    }

    fn unstable(w: PairWitness) -> Self {
        Self { semistable: false, witness: Some(w) }
    }
}

fn high_degree(pair: &PairObject, delta: &RatPoly) -> bool {
    delta
        .degree()
        .is_some_and(|e| e >= pair.lattice().dimension() as i32)
}

/// Decides semistability of the pair for `delta`.
pub fn pair_semistable(pair: &PairObject, delta: &RatPoly) -> PairVerdict {
    let lat = pair.lattice();
    let beta = pair.beta_image();
    let contains = |m: MemberId| beta.is_some_and(|b| lat.leq(b, m));
    match delta.eventual_sign() {
        0 => {
            let v = is_semistable(lat);
            return match v.witness {
                None => PairVerdict::stable(),
                Some(m) => PairVerdict::unstable(PairWitness::Subobject {
                    member: m,
                    contains_image: contains(m),
                }),
            };
        }
        s if s < 0 => return PairVerdict::unstable(PairWitness::NegativeDelta),
        _ => {}
    }
    let Some(b) = beta else {
        return PairVerdict::unstable(PairWitness::ZeroMap);
    };
    if high_degree(pair, delta) {
        return if b == lat.top() {
            PairVerdict::stable()
        } else {
            PairVerdict::unstable(PairWitness::Subobject { member: b, contains_image: true })
        };
    }
    let top = lat.stats(lat.top());
    let bound = &top.reduced() + &delta.scale(&top.rank().recip());
    let mut worst: Option<(RatPoly, MemberId)> = None;
    for m in lat.proper_members() {
        let s = lat.stats(m);
        let mut rhs = s.reduced();
        if contains(m) {
            rhs = &rhs + &delta.scale(&s.rank().recip());
        }
        let excess = &rhs - &bound;
        if excess.eventual_sign() > 0 && worst.as_ref().map_or(true, |(e, _)| excess > *e) {
            worst = Some((excess, m));
        }
    }
    match worst {
        None => PairVerdict::stable(),
        Some((_, m)) => PairVerdict::unstable(PairWitness::Subobject {
            member: m,
            contains_image: contains(m),
        }),
    }
}

/// The destabilizing filtration when `deg(delta) >= d`.
pub fn pair_canonical_high_degree(
    pair: &PairObject,
    delta: &RatPoly,
) -> Result<WeightedFiltration, PairError> {
    let lat = pair.lattice();
    if !high_degree(pair, delta) {
        return Err(PairError::DegreeTooLow {
            degree: delta.degree(),
            dim: lat.dimension(),
        });
    }
    let trivial = UnweightedFiltration::trivial(lat);
    if delta.eventual_sign() < 0 {
        return Ok(trivial.with_weights(vec![1])?);
    }
    match pair.beta_image() {
        None => Ok(trivial.with_weights(vec![-1])?),
        Some(b) if b == lat.top() => Err(PairError::Semistable),
        Some(b) => Ok(UnweightedFiltration::new(lat, vec![lat.top(), b])?.with_weights(vec![-1, 0])?),
    }
}

/// Coefficient of `n^(d-1)` in `nu^(delta)(f)`.
pub fn nu_slope_coeff(f: &WeightedFiltration, delta: &RatPoly) -> NuValue {
    nu_delta(f, delta).coefficient(f.lattice().dimension() as i32 - 1)
}

/// `|nu_D|^2 <= (delta_D / rk F)^2 q` with `D = deg(delta)` and `q` the total
/// rank of graded pieces of nonzero weight.
pub fn cauchy_schwarz_holds(f: &WeightedFiltration, delta: &RatPoly) -> bool {
    let Some(deg) = delta.degree() else { return true };
    let lat = f.lattice();
    let v = nu_delta(f, delta);
    let lhs = v.coefficient_signed_square(deg).abs();
    let q: Rational = f
        .base()
        .gradeds()
        .iter()
        .zip(f.weights())
        .filter(|(_, &w)| w != 0)
        .map(|(g, _)| g.rank().clone())
        .sum();
    let ratio = delta.coeff(deg) / lat.rank(lat.top());
    lhs <= &ratio * &ratio * q
}

/// Weighted least-squares nondecreasing fit (pool adjacent violators).
fn isotonic(c: &[Rational], r: &[Rational]) -> Vec<Rational> {
    let mut blocks: Vec<(Rational, Rational, usize)> = Vec::new();
    for (ci, ri) in c.iter().zip(r) {
        blocks.push((ci * ri, ri.clone(), 1));
        while blocks.len() >= 2 {
            let (s1, w1, _) = &blocks[blocks.len() - 2];
            let (s2, w2, _) = &blocks[blocks.len() - 1];
            if s1 / w1 > s2 / w2 {
                let (s2, w2, n2) = blocks.pop().unwrap();
                let last = blocks.last_mut().unwrap();
                last.0 += s2;
                last.1 += w2;
                last.2 += n2;
            } else {
                break;
            }
        }
    }
    blocks
        .into_iter()
        .flat_map(|(s, w, n)| std::iter::repeat(s / w).take(n))
        .collect()
}

/// Optimal real weights on one chain for the top coefficient of `nu^(delta)`.
#[derive(Debug, Clone)]
pub struct WeightMaximizer {
    pub chain: UnweightedFiltration,
    /// Nondecreasing optimal weights; equal neighbours mean merged steps.
    pub weights: Vec<Rational>,
    /// Optimal value of the `n^(d-1)` coefficient.
    pub value: NuValue,
}

impl WeightMaximizer {
    /// Merges equal neighbouring weights and scales to primitive integers.
    pub fn to_filtration(&self) -> Result<WeightedFiltration, PairError> {
        let keep: Vec<usize> = (0..self.weights.len())
            .filter(|&k| k == 0 || self.weights[k] != self.weights[k - 1])
            .collect();
        let ws: Vec<Rational> = keep.iter().map(|&k| self.weights[k].clone()).collect();
        let ints = primitive_integer_vector(&ws)
            .ok_or(PairError::FlatObjective)?
            .iter()
            .map(|x| x.to_i64().ok_or(ModelError::WeightOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        let chain = keep.iter().map(|&k| self.chain.chain()[k]).collect();
        Ok(UnweightedFiltration::new(self.chain.lattice(), chain)?.with_weights(ints)?)
    }
}

/// Maximizes the `n^(d-1)` coefficient of `nu^(delta)` over real weights on a
/// fixed chain, subject to monotonicity and the pair constraint.
///
/// The coefficient is `<c, w>_B / |w|_B` with `B = diag(rk(gr_k))` and
/// `c_k` the `n^(d-1)` coefficient of `pbar(gr_k) - pbar(F) - delta/rk(F)`,
/// so the optimum is the `B`-projection of `c` onto the feasible cone.
pub fn maximize_weights(
    chain: &UnweightedFiltration,
    pair: &PairObject,
    delta: &RatPoly,
) -> Result<WeightMaximizer, PairError> {
    let lat = chain.lattice();
    let e = lat.dimension() as i32 - 1;
    let top = lat.stats(lat.top());
    let shifted = &top.reduced() + &delta.scale(&top.rank().recip());
    let gr = chain.gradeds();
    let c: Vec<Rational> = gr.iter().map(|g| (&g.reduced() - &shifted).coeff(e)).collect();
    let r: Vec<Rational> = gr.iter().map(|g| g.rank().clone()).collect();
    if c.iter().all(Zero::is_zero) {
        return Err(PairError::FlatObjective);
    }
    let free = isotonic(&c, &r);
    let weights = match pair.constraint_index(chain.chain()) {
        Some(j) if free[j].is_negative() => {
            let zero = Rational::zero();
            let mut w: Vec<Rational> = isotonic(&c[..j], &r[..j])
                .into_iter()
                .map(|x| x.min(zero.clone()))
                .collect();
            w.push(zero.clone());
            w.extend(
                isotonic(&c[j + 1..], &r[j + 1..])
                    .into_iter()
                    .map(|x| x.max(zero.clone())),
            );
            w
        }
        _ => free,
    };
    if weights.iter().all(Zero::is_zero) {
        return Err(PairError::FlatObjective);
    }
    let l: Rational = weights.iter().zip(&c).zip(&r).map(|((w, c), r)| w * c * r).sum();
    let b: Rational = weights.iter().zip(&r).map(|(w, r)| w * w * r).sum();
    let value = NuValue::new(RatPoly::constant(l), b).expect("nonzero weights give positive norm");
    Ok(WeightMaximizer {
        chain: chain.clone(),
        weights,
        value,
    })
}

/// How [`pair_canonical`] found its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalMethod {
    HighDegree,
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone)]
pub struct PairCanonical {
    pub filtration: WeightedFiltration,
    /// Full `nu^(delta)` of the filtration.
    pub value: NuValue,
    pub method: CanonicalMethod,
}

/// The `nu^(delta)`-maximizing filtration of an unstable pair.
///
/// For `deg(delta) < d` each chain is optimized in closed form and the best
/// top coefficient wins; when that is not positive or not unique the bounded
/// oracle with weights in `[-bound, bound]` decides.
pub fn pair_canonical(pair: &PairObject, delta: &RatPoly, bound: u32) -> Result<PairCanonical, PairError> {
    if pair_semistable(pair, delta).semistable {
        return Err(PairError::Semistable);
    }
    let finish = |f: WeightedFiltration, method| PairCanonical {
        value: nu_delta(&f, delta),
        filtration: f,
        method,
    };
    if high_degree(pair, delta) {
        return Ok(finish(pair_canonical_high_degree(pair, delta)?, CanonicalMethod::HighDegree));
    }
    let lat = pair.lattice();
    let mut best: Vec<(NuValue, WeightedFiltration)> = Vec::new();
    for chain in enumerate_chains(lat) {
        let Ok(m) = maximize_weights(&chain, pair, delta) else { continue };
        let f = m.to_filtration()?;
        match best.first().map(|(v, _)| m.value.cmp(v)) {
            None | Some(Ordering::Greater) => best = vec![(m.value, f)],
            Some(Ordering::Equal) => {
                if !best.iter().any(|(_, g)| *g == f) {
                    best.push((m.value, f));
                }
            }
            Some(Ordering::Less) => {}
        }
    }
    if let [(v, f)] = best.as_slice() {
        if v.sign() > 0 {
            return Ok(finish(f.clone(), CanonicalMethod::ClosedForm));
        }
    }
    let res = brute_force_max(lat, Some(pair), delta, bound);
    match res.best {
        Some(f) => Ok(finish(f, CanonicalMethod::Oracle)),
        None => Err(PairError::OracleInconclusive(bound)),
    }
}

/// One row of a delta sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub delta: RatPoly,
    pub verdict: PairVerdict,
    /// The verdict differs from the previous row.
    pub wall: bool,
}

/// Evaluates [`pair_semistable`] at each delta, in input order.
pub fn sweep(pair: &PairObject, deltas: &[RatPoly]) -> Vec<SweepRow> {
    let verdicts: Vec<PairVerdict> = deltas.par_iter().map(|d| pair_semistable(pair, d)).collect();
    let mut prev: Option<bool> = None;
    deltas
        .iter()
        .zip(verdicts)
        .map(|(d, v)| {
            let wall = prev.is_some_and(|p| p != v.semistable);
            prev = Some(v.semistable);
            SweepRow { delta: d.clone(), verdict: v, wall }
        })
        .collect()
}
