//! Exhaustive search over chains and bounded integer weights.
//!
//! Independent of the closed-form machinery: every chain of nonzero members
//! starting at top is paired with every strictly increasing weight vector in
//! `[-W, W]`, and `nu^(delta)` is evaluated directly.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::invariant::nu_delta;
use crate::ratpoly::{int, NuValue, RatPoly, Rational};
use crate::sheafmodel::{MemberId, PairObject, SubobjectLattice, UnweightedFiltration, WeightedFiltration};

/// All chains `top = G_(0) > ... > G_(q) > 0`, ordered lexicographically by labels.
pub fn enumerate_chains(lat: &Arc<SubobjectLattice>) -> Vec<UnweightedFiltration> {
    fn extend(lat: &SubobjectLattice, prefix: &mut Vec<MemberId>, out: &mut Vec<Vec<MemberId>>) {
        out.push(prefix.clone());
        let last = *prefix.last().expect("prefix starts at top");
        for m in lat.nonzero_members() {
            if lat.lt(m, last) {
                prefix.push(m);
                extend(lat, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut chains = Vec::new();
    extend(lat, &mut vec![lat.top()], &mut chains);
    let key = |c: &Vec<MemberId>| c.iter().map(|&m| lat.label(m).to_string()).collect::<Vec<_>>();
    chains.sort_by_cached_key(key);
    chains
        .into_iter()
        .map(|c| UnweightedFiltration::new(lat, c).expect("enumerated chains are valid"))
        .collect()
}

/// Result of [`brute_force_max`].
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Maximizer, present only when the maximum is positive.
    pub best: Option<WeightedFiltration>,
    /// Maximum over all candidates.
    pub value: NuValue,
    /// Number of (chain, weights) candidates evaluated.
    pub explored: u64,
}

/// One evaluated candidate.
#[derive(Debug, Clone)]
pub struct OracleRow {
    pub chain: UnweightedFiltration,
    pub weights: Vec<i64>,
    pub value: NuValue,
}

/// Per-chain data so that each candidate costs a few multiply-adds.
struct ChainTerms {
    chain: UnweightedFiltration,
    excess: Vec<RatPoly>,
    ranks: Vec<Rational>,
    fast: Option<IntTerms>,
}

/// The same data scaled to integers. Within one chain the common positive
/// scale factors do not affect comparisons.
struct IntTerms {
    /// Exponents present in any excess polynomial, highest first.
    exps: Vec<i32>,
    /// `excess[k]` coefficients at `exps`.
    excess: Vec<Vec<i128>>,
    ranks: Vec<i128>,
}

fn to_i128(r: &Rational) -> Option<i128> {
    r.is_integer().then(|| r.to_integer().to_i128()).flatten()
}

impl IntTerms {
    fn new(excess: &[RatPoly], ranks: &[Rational]) -> Option<Self> {
        let mut exps: Vec<i32> = excess.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps.dedup();
        let lcm = |xs: &mut dyn Iterator<Item = &Rational>| {
            xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
        };
        let du = Rational::from_integer(lcm(&mut excess.iter().flat_map(|p| p.terms().map(|(_, c)| c))));
        let dr = Rational::from_integer(lcm(&mut ranks.iter()));
        let excess = excess
            .iter()
            .map(|p| exps.iter().map(|&e| to_i128(&(p.coeff(e) * &du))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let ranks = ranks.iter().map(|r| to_i128(&(r * &dr))).collect::<Option<Vec<_>>>()?;
        Some(Self { exps, excess, ranks })
    }

    /// Scaled `(L, b)`, or `None` on overflow.
    fn value(&self, w: &[i64]) -> Option<(Vec<i128>, i128)> {
        let mut b: i128 = 0;
        for (r, &x) in self.ranks.iter().zip(w) {
            b = b.checked_add(r.checked_mul(i128::from(x) * i128::from(x))?)?;
        }
        let mut l = vec![0i128; self.exps.len()];
        for (u, &x) in self.excess.iter().zip(w) {
            for (acc, c) in l.iter_mut().zip(u) {
                *acc = acc.checked_add(c.checked_mul(i128::from(x))?)?;
            }
        }
        Some((l, b))
    }
}

/// Compares `lx / sqrt(bx)` with `ly / sqrt(by)`; `None` on overflow.
fn int_compare(x: &(Vec<i128>, i128), y: &(Vec<i128>, i128)) -> Option<Ordering> {
    let zero_x = x.1 == 0;
    let zero_y = y.1 == 0;
    for (cx, cy) in x.0.iter().zip(&y.0) {
        let cx = if zero_x { 0 } else { *cx };
        let cy = if zero_y { 0 } else { *cy };
        let (sx, sy) = (cx.signum(), cy.signum());
        if sx != sy {
            return Some(sx.cmp(&sy));
        }
        if sx == 0 {
            continue;
        }
        let lhs = cx.checked_mul(cx)?.checked_mul(y.1)?;
        let rhs = cy.checked_mul(cy)?.checked_mul(x.1)?;
        let ord = if sx > 0 { lhs.cmp(&rhs) } else { rhs.cmp(&lhs) };
        if ord != Ordering::Equal {
            return Some(ord);
        }
    }
    Some(Ordering::Equal)
}

fn chain_terms(chain: UnweightedFiltration, delta: &RatPoly) -> ChainTerms {
    let lat = chain.lattice();
    let top = lat.stats(lat.top());
    let shifted = &top.reduced() + &delta.scale(&top.rank().recip());
    let gr = chain.gradeds();
    let excess: Vec<RatPoly> = gr.iter().map(|g| g.poly() - &shifted.scale(g.rank())).collect();
    let ranks: Vec<Rational> = gr.iter().map(|g| g.rank().clone()).collect();
    ChainTerms {
        fast: IntTerms::new(&excess, &ranks),
        excess,
        ranks,
        chain,
    }
}

impl ChainTerms {
    fn value(&self, w: &[i64]) -> NuValue {
        let b: Rational = self.ranks.iter().zip(w).map(|(r, &x)| r * int(x * x)).sum();
        if b == int(0) {
            return NuValue::zero();
        }
        let l: RatPoly = self.excess.iter().zip(w).map(|(u, &x)| u.scale(&int(x))).sum();
        NuValue::new(l, b).expect("positive norm")
    }

    /// Compares the values at two weight vectors of this chain.
    fn compare(&self, a: &[i64], b: &[i64]) -> Ordering {
        if let Some(fast) = &self.fast {
            if let (Some(x), Some(y)) = (fast.value(a), fast.value(b)) {
                if let Some(ord) = int_compare(&x, &y) {
                    return ord;
                }
            }
        }
        self.value(a).cmp(&self.value(b))
    }
}

/// Calls `visit` on every strictly increasing vector of length `len` in `[-bound, bound]`.
fn for_each_weights(len: usize, bound: i64, visit: &mut dyn FnMut(&[i64])) {
    fn rec(buf: &mut Vec<i64>, len: usize, lo: i64, bound: i64, visit: &mut dyn FnMut(&[i64])) {
        if buf.len() == len {
            visit(buf);
            return;
        }
        let remaining = (len - buf.len()) as i64;
        for x in lo..=(bound - remaining + 1) {
            buf.push(x);
            rec(buf, len, x + 1, bound, visit);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(len), len, -bound, bound, visit);
}

fn admissible(pair: Option<&PairObject>, chain: &[MemberId], w: &[i64]) -> bool {
    pair.map_or(true, |p| p.admits(chain, w))
}

fn square_sum(w: &[i64]) -> i128 {
    w.iter().map(|x| i128::from(*x) * i128::from(*x)).sum()
}

/// Candidate order: larger value, then shorter chain, then chain labels, then
/// smaller `sum w^2` (so primitive vectors beat their multiples), then weights.
fn better(
    a: (&NuValue, &UnweightedFiltration, &[i64]),
    b: (&NuValue, &UnweightedFiltration, &[i64]),
) -> bool {
    match a.0.cmp(b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let ka = (a.1.steps(), a.1.labels(), square_sum(a.2), a.2);
            let kb = (b.1.steps(), b.1.labels(), square_sum(b.2), b.2);
            ka < kb
        }
    }
}

/// Maximizes `nu^(delta)` over all chains and weights bounded by `bound`.
///
/// With a pair, candidates violating the pair constraint are skipped.
pub fn brute_force_max(
    lat: &Arc<SubobjectLattice>,
    pair: Option<&PairObject>,
    delta: &RatPoly,
    bound: u32,
) -> OracleResult {
    let bound = i64::from(bound);
    let per_chain: Vec<(ChainTerms, Option<(NuValue, Vec<i64>)>, u64)> = enumerate_chains(lat)
        .into_par_iter()
        .map(|chain| {
            let terms = chain_terms(chain, delta);
            let mut best: Option<Vec<i64>> = None;
            let mut explored = 0u64;
            let ids = terms.chain.chain().to_vec();
            for_each_weights(ids.len(), bound, &mut |w| {
                if !admissible(pair, &ids, w) {
                    return;
                }
                explored += 1;
                let replace = match &best {
                    None => true,
                    Some(bw) => match terms.compare(w, bw) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => (square_sum(w), w) < (square_sum(bw), bw.as_slice()),
                    },
                };
                if replace {
                    best = Some(w.to_vec());
                }
            });
            let best = best.map(|w| (terms.value(&w), w));
            (terms, best, explored)
        })
        .collect();

    let mut explored = 0;
    let mut winner: Option<(NuValue, UnweightedFiltration, Vec<i64>)> = None;
    for (terms, best, n) in per_chain {
        explored += n;
        if let Some((v, w)) = best {
            let replace = match &winner {
                None => true,
                Some((bv, bc, bw)) => better((&v, &terms.chain, &w), (bv, bc, bw)),
            };
            if replace {
                winner = Some((v, terms.chain, w));
            }
        }
    }
    match winner {
        Some((value, chain, w)) => {
            let best = (value.sign() > 0)
                .then(|| chain.with_weights(w).expect("enumerated weights increase"));
            OracleResult { best, value, explored }
        }
        None => OracleResult {
            best: None,
            value: NuValue::zero(),
            explored,
        },
    }
}

/// Every admissible candidate with its value, in enumeration order.
pub fn brute_force_rows(
    lat: &Arc<SubobjectLattice>,
    pair: Option<&PairObject>,
    delta: &RatPoly,
    bound: u32,
) -> Vec<OracleRow> {
    let bound = i64::from(bound);
    let mut rows = Vec::new();
    for chain in enumerate_chains(lat) {
        let terms = chain_terms(chain, delta);
        let ids = terms.chain.chain().to_vec();
        for_each_weights(ids.len(), bound, &mut |w| {
            if admissible(pair, &ids, w) {
                rows.push(OracleRow {
                    chain: terms.chain.clone(),
                    weights: w.to_vec(),
                    value: terms.value(w),
                });
            }
        });
    }
    rows
}

/// Cross-check helper: the value of a filtration through the public invariant.
pub fn evaluate(f: &WeightedFiltration, delta: &RatPoly) -> NuValue {
    nu_delta(f, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::hilbert_line_bundle_projective as o;
    use crate::sheafmodel::{validate_lattice, LatticeSpec};

    fn boolean_lattice(n: usize) -> Arc<SubobjectLattice> {
        let name = |mask: usize| if mask == 0 { "0".to_string() } else { format!("S{mask:03b}") };
        let mut objects = Vec::new();
        let mut relations = Vec::new();
        for mask in 0..(1usize << n) {
            let poly: RatPoly = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| o(1, b as i64)).sum();
            objects.push((name(mask), poly));
            for b in 0..n {
                if mask >> b & 1 == 0 {
                    relations.push((name(mask), name(mask | 1 << b)));
                }
            }
        }
        Arc::new(
            validate_lattice(&LatticeSpec {
                dimension: 1,
                top: Some(name((1 << n) - 1)),
                objects,
                relations,
            })
            .unwrap(),
        )
    }

    #[test]
    fn weight_vectors_count_binomially() {
        let mut n = 0;
        for_each_weights(3, 2, &mut |w| {
            assert!(w[0] < w[1] && w[1] < w[2]);
            n += 1;
        });
        assert_eq!(n, 10);
    }

    #[test]
    fn boolean_cube_chain_count() {
        let lat = boolean_lattice(3);
        let chains = enumerate_chains(&lat);
        // 1 trivial chain, 6 with one more member, 6 with a doubleton and a singleton below it.
        assert_eq!(chains.len(), 13);
        assert!(chains.windows(2).all(|w| w[0].labels() < w[1].labels()));
    }

    #[test]
    fn finds_the_destabilizing_line() {
        let lat = boolean_lattice(2);
        let res = brute_force_max(&lat, None, &RatPoly::zero(), 1);
        let best = res.best.unwrap();
        assert_eq!(best.base().labels(), vec!["S011", "S010"]);
        assert_eq!(best.weights(), &[-1, 1]);
        assert_eq!(evaluate(&best, &RatPoly::zero()), res.value);
        assert_eq!(res.explored as usize, brute_force_rows(&lat, None, &RatPoly::zero(), 1).len());
    }

    #[test]
    fn integer_path_agrees_with_exact_rows() {
        let lat = boolean_lattice(3);
        for delta in ["0", "1/3", "-2", "n"] {
            let delta = RatPoly::parse(delta).unwrap();
            let res = brute_force_max(&lat, None, &delta, 3);
            let rows = brute_force_rows(&lat, None, &delta, 3);
            let max = rows.iter().map(|r| r.value.clone()).max().unwrap();
            assert_eq!(res.value, max);
            assert_eq!(res.explored as usize, rows.len());
        }
    }
}
