use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::ModelError;
use crate::ratpoly::{factorial, hilbert_stats, HilbertStats, RatPoly, Rational};

/// Index of a member inside its lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberId(pub usize);

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One member: a label, its Hilbert polynomial and, unless zero, its statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectClass {
    id: String,
    poly: RatPoly,
    stats: Option<HilbertStats>,
}

impl ObjectClass {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    /// `None` exactly for the zero member.
    pub fn stats(&self) -> Option<&HilbertStats> {
        self.stats.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.stats.is_none()
    }
}

/// Unvalidated lattice description.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticeSpec {
    pub dimension: u32,
    /// Explicit top; when absent the unique member of largest rank is used.
    pub top: Option<String>,
    pub objects: Vec<(String, RatPoly)>,
    /// Inclusions `(sub, super)`.
    pub relations: Vec<(String, String)>,
}

/// A validated finite lattice of subobjects with a transitively closed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubobjectLattice {
    dim: u32,
    members: Vec<ObjectClass>,
    index: BTreeMap<String, MemberId>,
    leq: Vec<Vec<bool>>,
    top: MemberId,
    zero: MemberId,
}

fn top_rank(poly: &RatPoly, d: u32) -> Rational {
    factorial(d) * poly.coeff(d as i32)
}

/// Checks the lattice invariants and closes the order transitively.
pub fn validate_lattice(spec: &LatticeSpec) -> Result<SubobjectLattice, ModelError> {
    let d = spec.dimension;
    let mut index = BTreeMap::new();
    for (k, (id, _)) in spec.objects.iter().enumerate() {
        if index.insert(id.clone(), MemberId(k)).is_some() {
            return Err(ModelError::DuplicateMember(id.clone()));
        }
    }
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| ModelError::UnknownMember(id.to_string()))
    };
    let zeros: Vec<usize> = (0..spec.objects.len())
        .filter(|&k| spec.objects[k].1.is_zero())
        .collect();
    let zero = match zeros.as_slice() {
        [z] => *z,
        [] => return Err(ModelError::MissingTopOrZero("no member has the zero polynomial".into())),
        _ => {
            return Err(ModelError::MissingTopOrZero(
                "several members have the zero polynomial".into(),
            ))
        }
    };
    let top = match &spec.top {
        Some(t) => lookup(t)?.0,
        None => {
            let ranks: Vec<Rational> = spec.objects.iter().map(|(_, p)| top_rank(p, d)).collect();
            let best = ranks.iter().max().cloned().unwrap_or_else(Rational::zero);
            let tops: Vec<usize> = (0..ranks.len()).filter(|&k| ranks[k] == best).collect();
            match tops.as_slice() {
                [t] => *t,
                _ => {
                    return Err(ModelError::MissingTopOrZero(
                        "no unique member of largest rank; name the top explicitly".into(),
                    ))
                }
            }
        }
    };
    if top == zero {
        return Err(ModelError::MissingTopOrZero("top is the zero member".into()));
    }

    let m = spec.objects.len();
    let mut leq = vec![vec![false; m]; m];
    for k in 0..m {
        leq[k][k] = true;
        leq[zero][k] = true;
        leq[k][top] = true;
    }
    for (a, b) in &spec.relations {
        let (a, b) = (lookup(a)?, lookup(b)?);
        leq[a.0][b.0] = true;
    }
    for k in 0..m {
        for i in 0..m {
            if leq[i][k] {
                for j in 0..m {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    let name = |k: usize| spec.objects[k].0.clone();
    for i in 0..m {
        for j in (i + 1)..m {
            if leq[i][j] && leq[j][i] {
                return Err(ModelError::CycleInRelation(name(i), name(j)));
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            if i == j || !leq[i][j] {
                continue;
            }
            let (pi, pj) = (&spec.objects[i].1, &spec.objects[j].1);
            if !(top_rank(pj, d) - top_rank(pi, d)).is_positive() {
                return Err(ModelError::RankNotIncreasing { sub: name(i), sup: name(j) });
            }
            let q = pj - pi;
            if q.degree() != Some(d as i32) || q.min_exponent().is_some_and(|e| e < 0) {
                return Err(ModelError::QuotientNotPure { sub: name(i), sup: name(j) });
            }
        }
    }
    let members = spec
        .objects
        .iter()
        .enumerate()
        .map(|(k, (id, poly))| {
            let stats = if k == zero {
                None
            } else {
                Some(hilbert_stats(poly, d).map_err(|_| ModelError::QuotientNotPure {
                    sub: name(zero),
                    sup: id.clone(),
                })?)
            };
            Ok(ObjectClass {
                id: id.clone(),
                poly: poly.clone(),
                stats,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(SubobjectLattice {
        dim: d,
        members,
        index,
        leq,
        top: MemberId(top),
        zero: MemberId(zero),
    })
}

impl SubobjectLattice {
    pub fn dimension(&self) -> u32 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn top(&self) -> MemberId {
        self.top
    }

    pub fn zero(&self) -> MemberId {
        self.zero
    }

    pub fn member(&self, id: MemberId) -> &ObjectClass {
        &self.members[id.0]
    }

    pub fn label(&self, id: MemberId) -> &str {
        &self.members[id.0].id
    }

    pub fn lookup(&self, label: &str) -> Result<MemberId, ModelError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| ModelError::UnknownMember(label.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = MemberId> {
        (0..self.members.len()).map(MemberId)
    }

    /// `a <= b` in the closed order.
    pub fn leq(&self, a: MemberId, b: MemberId) -> bool {
        self.leq[a.0][b.0]
    }

    /// `a < b` in the closed order.
    pub fn lt(&self, a: MemberId, b: MemberId) -> bool {
        a != b && self.leq[a.0][b.0]
    }

    pub fn poly(&self, id: MemberId) -> &RatPoly {
        &self.members[id.0].poly
    }

    /// Statistics of a nonzero member.
    ///
    /// # Panics
    /// Panics on the zero member.
    pub fn stats(&self, id: MemberId) -> &HilbertStats {
        self.members[id.0]
            .stats
            .as_ref()
            .expect("zero member has no Hilbert statistics")
    }

    /// Rank, zero for the zero member.
    pub fn rank(&self, id: MemberId) -> Rational {
        self.members[id.0]
            .stats
            .as_ref()
            .map_or_else(Rational::zero, |s| s.rank().clone())
    }

    /// Nonzero members in declaration order.
    pub fn nonzero_members(&self) -> Vec<MemberId> {
        self.ids().filter(|&k| k != self.zero).collect()
    }

    /// Nonzero members other than top.
    pub fn proper_members(&self) -> Vec<MemberId> {
        self.ids()
            .filter(|&k| k != self.zero && k != self.top)
            .collect()
    }

    /// Statistics of `sup / sub` for `sub < sup`.
    pub fn quotient_stats(&self, sub: MemberId, sup: MemberId) -> Result<HilbertStats, ModelError> {
        if !self.lt(sub, sup) {
            return Err(ModelError::NotComparable {
                sub: self.label(sub).to_string(),
                sup: self.label(sup).to_string(),
            });
        }
        let q = self.poly(sup) - self.poly(sub);
        hilbert_stats(&q, self.dim).map_err(|_| ModelError::QuotientNotPure {
            sub: self.label(sub).to_string(),
            sup: self.label(sup).to_string(),
        })
    }

    /// Description that validates back to an equal lattice.
    pub fn to_spec(&self) -> LatticeSpec {
        let mut relations = Vec::new();
        for a in self.ids() {
            for b in self.ids() {
                if self.lt(a, b) {
                    relations.push((self.label(a).to_string(), self.label(b).to_string()));
                }
            }
        }
        LatticeSpec {
            dimension: self.dim,
            top: Some(self.label(self.top).to_string()),
            objects: self
                .members
                .iter()
                .map(|m| (m.id.clone(), m.poly.clone()))
                .collect(),
            relations,
        }
    }
}
