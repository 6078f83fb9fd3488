//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p thetastab --test acceptance`.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thetastab::canonical::{
    canonical_filtration, delete_step, hn_filtration, is_convex, is_semistable, leading_term,
};
use thetastab::invariant::{convex_hull, nu, polytope, polytope_subset, weight_graded, weight_subobject};
use thetastab::oracle::{brute_force_max, brute_force_rows, enumerate_chains};
use thetastab::pairs::{
    cauchy_schwarz_holds, maximize_weights, pair_canonical, pair_canonical_high_degree, pair_semistable,
    PairWitness,
};
use thetastab::ratpoly::{int, rat, NuValue, RatPoly};
use thetastab::sheafmodel::{PairObject, SubobjectLattice, UnweightedFiltration};

const SEED: u64 = 0x7e7a_57ab;
/// Wall-clock limit for reproducing the worked example.
const EXAMPLE_TIME_LIMIT: Duration = Duration::from_secs(1);
const EXAMPLE_ORACLE_BOUND: u32 = 6;
const IDENTITY_TRIALS: usize = 10_000;
const DELETION_TRIALS: usize = 1_000;
const MIN_UNSTABLE_LATTICES: usize = 50;
/// Largest number of (chain, weights) candidates the exhaustive search may visit per lattice.
const ORACLE_CANDIDATE_BUDGET: u64 = 2_000_000;
const MIN_PAIRS: usize = 20;
const PAIR_ORACLE_BOUND: u32 = 3;
const SEMISTABILITY_ORACLE_BOUND: u32 = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn nu_of(l: i64, b: i64) -> NuValue {
    NuValue::new(RatPoly::constant(int(l)), int(b)).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let doc = fixture("example_nonconvex.lattice");
    let pair = doc.pair.clone().unwrap();
    let lat = &doc.lattice;
    let delta = RatPoly::zero();
    let oracle = brute_force_max(lat, Some(&pair), &delta, EXAMPLE_ORACLE_BOUND);
    let closed = pair_canonical(&pair, &delta, EXAMPLE_ORACLE_BOUND).unwrap();
    let elapsed = start.elapsed();

    let expect_chain = vec!["F", "O(5)+O", "O(5)"];
    let chain = UnweightedFiltration::from_labels(lat, &expect_chain).unwrap();
    let direct = maximize_weights(&chain, &pair, &delta).unwrap();
    let best = oracle.best.as_ref().unwrap();
    let oracle_ok = best.base().labels() == expect_chain && best.weights() == [-1, 0, 3];
    let closed_ok = closed.filtration.base().labels() == expect_chain
        && closed.filtration.weights() == [-1, 0, 3];
    let direct_ok = direct.weights == vec![int(-1), int(0), int(3)];
    let value_ok = oracle.value == nu_of(10, 10) && closed.value == nu_of(10, 10);

    let free = canonical_filtration(lat).unwrap();
    let free_ok = free.base().labels() == vec!["F", "O(5)+O(1)", "O(5)"]
        && free.weights() == [-2, -1, 3]
        && nu(&free) == nu_of(14, 14)
        && pair.check(&free).is_err();
    let time_ok = elapsed < EXAMPLE_TIME_LIMIT;
    outcome(
        oracle_ok && closed_ok && direct_ok && value_ok && free_ok && time_ok,
        format!(
            "oracle {:?} {:?}, closed form {:?}, nu = sqrt(10) {}, unconstrained sqrt(14) excluded {}, {:.1} ms (< {} ms)",
            best.base().labels(),
            best.weights(),
            closed.filtration.weights(),
            value_ok,
            free_ok,
            elapsed.as_secs_f64() * 1e3,
            EXAMPLE_TIME_LIMIT.as_millis()
        ),
    )
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let mut mismatches = 0;
    for _ in 0..IDENTITY_TRIALS {
        let dim = rng.gen_range(1..=3);
        let lat = build(&random_recipe(rng, dim));
        let chain = random_chain(rng, &lat, 5);
        let w = random_weights(rng, chain.steps(), 10);
        let f = chain.with_weights(w).unwrap();
        if weight_graded(&f) != weight_subobject(&f) {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{IDENTITY_TRIALS} random filtrations (d <= 3, length <= 5, |w| <= 10), {mismatches} mismatches"),
    )
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    let mut drops = 0;
    let mut attempts = 0;
    while checked < DELETION_TRIALS && attempts < 200 * DELETION_TRIALS {
        attempts += 1;
        let dim = rng.gen_range(1..=2);
        let lat = build(&random_recipe(rng, dim));
        let chain = random_chain(rng, &lat, 5);
        let w = random_weights(rng, chain.steps(), 10);
        let f = chain.with_weights(w).unwrap();
        let before = nu(&f);
        if before.sign() < 0 {
            continue;
        }
        let gr = f.base().gradeds();
        let violating: Vec<usize> = (0..gr.len().saturating_sub(1))
            .filter(|&i| gr[i + 1].reduced() < gr[i].reduced())
            .collect();
        if violating.is_empty() {
            continue;
        }
        let i = violating[rng.gen_range(0..violating.len())];
        let after = nu(&delete_step(&f, i).unwrap());
        checked += 1;
        if after < before {
            drops += 1;
        }
    }
    outcome(
        checked >= DELETION_TRIALS && drops == 0,
        format!("{checked} non-convex filtrations with nu >= 0, {drops} deletions decreased nu"),
    )
}

struct Corpus {
    lattices: Vec<Arc<SubobjectLattice>>,
    over_budget: usize,
}

/// Weight bound for the exhaustive search: the largest canonical weight.
fn oracle_bound(lat: &Arc<SubobjectLattice>) -> Option<u32> {
    let canon = canonical_filtration(lat).ok()?;
    canon.weights().iter().map(|x| x.unsigned_abs()).max().map(|w| w as u32)
}

fn within_budget(lat: &Arc<SubobjectLattice>) -> bool {
    oracle_bound(lat).is_none_or(|w| search_size(lat, u64::from(w)) <= ORACLE_CANDIDATE_BUDGET)
}

fn corpus(rng: &mut ChaCha8Rng) -> Corpus {
    let mut lattices = Vec::new();
    let mut unstable = 0;
    let mut over_budget = 0;
    while unstable < MIN_UNSTABLE_LATTICES + 10 {
        let dim = rng.gen_range(1..=2);
        let lat = build(&random_recipe_with(rng, dim, small_step));
        if !is_semistable(&lat).semistable {
            if !within_budget(&lat) {
                over_budget += 1;
                continue;
            }
            unstable += 1;
        }
        lattices.push(lat);
    }
    Corpus { lattices, over_budget }
}

fn criterion_4(c: &Corpus) -> Outcome {
    let mut agree = 0;
    let mut total = 0;
    let mut failures = Vec::new();
    for lat in &c.lattices {
        if is_semistable(lat).semistable {
            continue;
        }
        total += 1;
        let canon = match canonical_filtration(lat) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{e}"));
                continue;
            }
        };
        let w = oracle_bound(lat).unwrap();
        let res = brute_force_max(lat, None, &RatPoly::zero(), w);
        if res.best.as_ref() == Some(&canon) && res.value == nu(&canon) {
            agree += 1;
        } else {
            failures.push(format!("{canon:?} vs {:?}", res.best));
        }
    }
    outcome(
        total >= MIN_UNSTABLE_LATTICES && agree == total,
        format!(
            "{agree}/{total} unstable lattices (<= 8 members, d <= 2) match the oracle at W = max|w| \
             ({} further lattices above {ORACLE_CANDIDATE_BUDGET} candidates not searched){}",
            c.over_budget,
            failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_5(c: &Corpus) -> Outcome {
    let mut agree = 0;
    let mut semistable = 0;
    for lat in &c.lattices {
        let v = is_semistable(lat);
        semistable += usize::from(v.semistable);
        let res = brute_force_max(lat, None, &RatPoly::zero(), SEMISTABILITY_ORACLE_BOUND);
        let hn_trivial = hn_filtration(lat).map(|h| h.is_trivial()).unwrap_or(false);
        if v.semistable == res.best.is_none() && v.semistable == hn_trivial {
            agree += 1;
        }
    }
    outcome(
        agree == c.lattices.len(),
        format!(
            "{agree}/{} lattices ({semistable} semistable): reduced-polynomial test = no positive nu at W = {SEMISTABILITY_ORACLE_BOUND}",
            c.lattices.len()
        ),
    )
}

fn fixture_pairs() -> Vec<PairObject> {
    let sets: &[&[(&str, i64)]] = &[
        &[("O", 0), ("O(1)", 1)],
        &[("O", 0), ("O(2)", 2)],
        &[("O", 0), ("O'", 0)],
        &[("O(1)", 1), ("O", 0), ("O'", 0)],
        &[("O(2)", 2), ("O(1)", 1), ("O", 0)],
        &[("O(3)", 3), ("O", 0), ("O(-1)", -1)],
    ];
    let mut pairs = Vec::new();
    for s in sets {
        let lat = lines(1, s);
        pairs.push(PairObject::new(&lat, None).unwrap());
        for m in lat.nonzero_members() {
            pairs.push(PairObject::new(&lat, Some(m)).unwrap());
        }
    }
    pairs
}

fn criterion_6() -> Outcome {
    let pairs = fixture_pairs();
    let deltas = [rat(1, 2), int(1), int(2)].map(RatPoly::constant);
    let mut agree = 0;
    let mut total = 0;
    for pair in &pairs {
        for d in &deltas {
            total += 1;
            let v = pair_semistable(pair, d);
            let res = brute_force_max(pair.lattice(), Some(pair), d, PAIR_ORACLE_BOUND);
            if v.semistable == res.best.is_none() {
                agree += 1;
            }
        }
    }
    let lat = lines(1, &[("O", 0), ("O(1)", 1)]);
    let wall = PairObject::new(&lat, Some(lat.lookup("O").unwrap())).unwrap();
    let at = |d: RatPoly| pair_semistable(&wall, &d);
    let one = at(RatPoly::constant(int(1))).semistable;
    let half = at(RatPoly::constant(rat(1, 2))).witness
        == Some(PairWitness::Subobject { member: lat.lookup("O(1)").unwrap(), contains_image: false });
    let two = at(RatPoly::constant(int(2))).witness
        == Some(PairWitness::Subobject { member: lat.lookup("O").unwrap(), contains_image: true });
    outcome(
        pairs.len() >= MIN_PAIRS && agree == total && one && half && two,
        format!(
            "{agree}/{total} (pair, delta) verdicts match the oracle at W = {PAIR_ORACLE_BOUND} over {} pairs; wall at delta = 1: semistable {one}, O(1) witness at 1/2 {half}, O witness at 2 {two}",
            pairs.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let pairs = fixture_pairs();
    let minus_n2 = RatPoly::parse("-n^2").unwrap();
    let n = RatPoly::n();
    let mut negative_ok = 0;
    let mut linear_ok = 0;
    for pair in &pairs {
        let lat = pair.lattice();
        let f = pair_canonical_high_degree(pair, &minus_n2).unwrap();
        let res = brute_force_max(lat, Some(pair), &minus_n2, 2);
        if !pair_semistable(pair, &minus_n2).semistable
            && f.chain() == [lat.top()]
            && f.weights() == [1]
            && res.best.as_ref() == Some(&f)
        {
            negative_ok += 1;
        }
        let full = pair.beta_image() == Some(lat.top());
        let v = pair_semistable(pair, &n);
        let res = brute_force_max(lat, Some(pair), &n, 2);
        let canon_ok = match pair_canonical_high_degree(pair, &n) {
            Ok(f) => res.best.as_ref() == Some(&f),
            Err(_) => full,
        };
        if v.semistable == full && res.best.is_none() == full && canon_ok {
            linear_ok += 1;
        }
    }
    let mut checked = 0;
    let mut violations = 0;
    for pair in &pairs {
        for d in ["-n^2", "n", "n^2 + n", "2n - 3", "-3n + 1"] {
            let d = RatPoly::parse(d).unwrap();
            for row in brute_force_rows(pair.lattice(), Some(pair), &d, 2) {
                let f = row.chain.clone().with_weights(row.weights.clone()).unwrap();
                checked += 1;
                if !cauchy_schwarz_holds(&f, &d) {
                    violations += 1;
                }
            }
        }
    }
    let total = pairs.len();
    outcome(
        negative_ok == total && linear_ok == total && violations == 0,
        format!(
            "delta = -n^2 unstable via (F; 1): {negative_ok}/{total}; delta = n semistable iff image saturates to top: {linear_ok}/{total}; bound on top coefficient: {violations} violations in {checked} filtrations"
        ),
    )
}

fn criterion_8(c: &Corpus) -> Outcome {
    let mut checked = 0;
    let mut outside = 0;
    let mut lats: Vec<Arc<SubobjectLattice>> = c.lattices.clone();
    for name in ["example_nonconvex.lattice", "o2_o1_o.lattice", "o2_o.lattice", "p2_o1_o.lattice"] {
        lats.push(fixture(name).lattice);
    }
    for lat in &lats {
        if is_semistable(lat).semistable {
            continue;
        }
        let hn = hn_filtration(lat).unwrap();
        let i = leading_term(&hn).unwrap().index;
        let big = polytope(&hn.filtration, i).unwrap();
        for chain in enumerate_chains(lat) {
            if !is_convex(&chain) {
                continue;
            }
            let len = chain.steps();
            let w: Vec<i64> = (0..len as i64).collect();
            let any_nonneg = [w.clone(), w.iter().map(|x| x - len as i64 + 1).collect::<Vec<_>>()]
                .into_iter()
                .any(|w| nu(&chain.clone().with_weights(w).unwrap()).sign() >= 0);
            if !any_nonneg {
                continue;
            }
            checked += 1;
            if !polytope_subset(&polytope(&chain, i).unwrap(), &big) {
                outside += 1;
            }
        }
    }
    let doc = fixture("example_nonconvex.lattice");
    let hn = hn_filtration(&doc.lattice).unwrap();
    let hull = polytope(&hn.filtration, 0).unwrap();
    let expected = convex_hull(&[(int(0), int(0)), (int(-6), int(1)), (int(-8), int(2)), (int(-9), int(3))]);
    let hull_ok = hull == expected && hull.vertices().len() == 4;
    outcome(
        outside == 0 && hull_ok && checked > 0,
        format!(
            "{checked} convex chains carrying a filtration with nu >= 0, {outside} polytopes outside the HN polytope; HN hull {:?} exact {hull_ok}",
            hull
        ),
    )
}

fn report(k: usize, name: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = run();
    println!(
        "[criterion {k}] {} {name}: {} ({:.2} s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    o.pass
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let corpus = corpus(&mut rng);
    let mut passed = vec![
        report(1, "worked example via oracle and closed form", criterion_1),
        report(2, "weight identity on random filtrations", || criterion_2(&mut rng)),
        report(3, "deletion never decreases nu", || criterion_3(&mut rng)),
        report(4, "canonical filtration equals oracle maximizer", || criterion_4(&corpus)),
        report(5, "semistability equivalence", || criterion_5(&corpus)),
        report(6, "pair criterion equivalence and wall", criterion_6),
        report(7, "large-degree pair stability", criterion_7),
        report(8, "polytope containment", || criterion_8(&corpus)),
    ];
    let covered = passed[1..].iter().all(|&p| p);
    println!(
        "[criterion 9] {} geometric scope: realized only through criteria 2-8 on modelled lattices",
        if covered { "PASS" } else { "FAIL" }
    );
    passed.push(covered);
    if passed.iter().all(|&p| p) {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
