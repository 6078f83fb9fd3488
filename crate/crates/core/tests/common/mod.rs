//! Shared generators and fixtures for integration tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use thetastab::ratpoly::{factorial, hilbert_line_bundle_projective, int, RatPoly};
use thetastab::sheafmodel::{
    parse_lattice_file, validate_lattice, LatticeDocument, LatticeSpec, SubobjectLattice,
    UnweightedFiltration,
};

/// Component-chain lengths of products of chains with at most eight members.
pub const SHAPES: &[&[usize]] = &[
    &[1],
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[1, 1],
    &[1, 2],
    &[1, 3],
    &[1, 1, 1],
];

/// A graded step: rank and lower coefficients `a_0 .. a_{d-1}` of
/// `P = sum a_k n^k / k!`.
#[derive(Debug, Clone)]
pub struct Step {
    pub rank: i64,
    pub lower: Vec<i64>,
}

/// Product of chains; component `j` has steps `steps[j][0..]`, bottom first.
#[derive(Debug, Clone)]
pub struct Recipe {
    pub dim: u32,
    pub steps: Vec<Vec<Step>>,
}

fn step_poly(dim: u32, s: &Step) -> RatPoly {
    let mut terms = vec![(dim as i32, int(s.rank) / factorial(dim))];
    for (k, a) in s.lower.iter().enumerate() {
        terms.push((k as i32, int(*a) / factorial(k as u32)));
    }
    RatPoly::from_terms(terms)
}

fn tuples(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &len in shape {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=len).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out
}

fn tuple_name(t: &[usize]) -> String {
    if t.iter().all(|&l| l == 0) {
        "0".to_string()
    } else {
        format!("m{}", t.iter().map(|l| l.to_string()).collect::<String>())
    }
}

pub fn build(recipe: &Recipe) -> Arc<SubobjectLattice> {
    let shape: Vec<usize> = recipe.steps.iter().map(Vec::len).collect();
    let all = tuples(&shape);
    let mut objects = Vec::new();
    let mut relations = Vec::new();
    for t in &all {
        let poly: RatPoly = t
            .iter()
            .enumerate()
            .flat_map(|(j, &l)| recipe.steps[j][..l].iter().map(|s| step_poly(recipe.dim, s)))
            .sum();
        objects.push((tuple_name(t), poly));
        for j in 0..t.len() {
            if t[j] < shape[j] {
                let mut u = t.clone();
                u[j] += 1;
                relations.push((tuple_name(t), tuple_name(&u)));
            }
        }
    }
    Arc::new(
        validate_lattice(&LatticeSpec {
            dimension: recipe.dim,
            top: Some(tuple_name(&shape)),
            objects,
            relations,
        })
        .expect("products of chains with positive steps are valid"),
    )
}

pub fn random_step<R: Rng>(rng: &mut R, dim: u32) -> Step {
    let rank = rng.gen_range(1..=3);
    let lower = (0..dim)
        .map(|_| {
            if rng.gen_bool(0.5) {
                rank * rng.gen_range(-2..=3)
            } else {
                rng.gen_range(-4..=6)
            }
        })
        .collect();
    Step { rank, lower }
}

pub fn random_recipe<R: Rng>(rng: &mut R, dim: u32) -> Recipe {
    random_recipe_with(rng, dim, random_step)
}

/// Steps of rank one or two with small coefficients, so that canonical
/// weights stay within reach of exhaustive search.
pub fn small_step<R: Rng>(rng: &mut R, dim: u32) -> Step {
    let rank = rng.gen_range(1..=2);
    let lower = (0..dim).map(|_| rank * rng.gen_range(-1..=2) + rng.gen_range(0..=1)).collect();
    Step { rank, lower }
}

pub fn random_recipe_with<R: Rng>(rng: &mut R, dim: u32, step: fn(&mut R, u32) -> Step) -> Recipe {
    let shape = SHAPES[rng.gen_range(0..SHAPES.len())];
    Recipe {
        dim,
        steps: shape
            .iter()
            .map(|&len| (0..len).map(|_| step(rng, dim)).collect())
            .collect(),
    }
}

/// Number of (chain, weights) candidates an exhaustive search at `bound` visits.
pub fn search_size(lat: &Arc<SubobjectLattice>, bound: u64) -> u64 {
    thetastab::oracle::enumerate_chains(lat)
        .iter()
        .map(|c| binomial(2 * bound + 1, c.steps() as u64))
        .sum()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn arb_step(dim: u32) -> impl Strategy<Value = Step> {
    (1i64..=3, prop::collection::vec(-4i64..=6, dim as usize))
        .prop_map(|(rank, lower)| Step { rank, lower })
}

pub fn arb_recipe(max_dim: u32) -> impl Strategy<Value = Recipe> {
    (1..=max_dim, prop::sample::select(SHAPES)).prop_flat_map(|(dim, shape)| {
        let comps: Vec<_> = shape
            .iter()
            .map(|&len| prop::collection::vec(arb_step(dim), len))
            .collect();
        comps.prop_map(move |steps| Recipe { dim, steps })
    })
}

/// Descends from top; each pick selects among strictly smaller nonzero members.
pub fn chain_from_picks(lat: &Arc<SubobjectLattice>, picks: &[usize]) -> UnweightedFiltration {
    let mut chain = vec![lat.top()];
    for &p in picks {
        let last = *chain.last().unwrap();
        let below: Vec<_> = lat
            .nonzero_members()
            .into_iter()
            .filter(|&m| lat.lt(m, last))
            .collect();
        if below.is_empty() {
            break;
        }
        chain.push(below[p % below.len()]);
    }
    UnweightedFiltration::new(lat, chain).unwrap()
}

pub fn random_chain<R: Rng>(rng: &mut R, lat: &Arc<SubobjectLattice>, max_len: usize) -> UnweightedFiltration {
    let extra = rng.gen_range(0..max_len);
    let picks: Vec<usize> = (0..extra).map(|_| rng.gen_range(0..64)).collect();
    chain_from_picks(lat, &picks)
}

/// Strictly increasing weights of length `len` in `[-bound, bound]`.
pub fn random_weights<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<i64> {
    let pool: Vec<i64> = (-bound..=bound).collect();
    let mut w: Vec<i64> = rand::seq::index::sample(rng, pool.len(), len)
        .into_iter()
        .map(|k| pool[k])
        .collect();
    w.sort_unstable();
    w
}

/// Coordinate sublattice of `O(k_1) + ... + O(k_r)` on projective `d`-space.
pub fn lines(dim: u32, summands: &[(&str, i64)]) -> Arc<SubobjectLattice> {
    let n = summands.len();
    let name = |mask: usize| {
        if mask == 0 {
            "0".to_string()
        } else if mask == (1 << n) - 1 && n > 1 {
            "F".to_string()
        } else {
            (0..n)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| summands[b].0)
                .collect::<Vec<_>>()
                .join("+")
        }
    };
    let mut objects = Vec::new();
    let mut relations = Vec::new();
    for mask in 0..(1usize << n) {
        let poly: RatPoly = (0..n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| hilbert_line_bundle_projective(dim, summands[b].1))
            .sum();
        objects.push((name(mask), poly));
        for b in 0..n {
            if mask >> b & 1 == 0 {
                relations.push((name(mask), name(mask | 1 << b)));
            }
        }
    }
    Arc::new(
        validate_lattice(&LatticeSpec {
            dimension: dim,
            top: Some(name((1 << n) - 1)),
            objects,
            relations,
        })
        .unwrap(),
    )
}

pub fn fixture(name: &str) -> LatticeDocument {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_lattice_file(&text).unwrap()
}
