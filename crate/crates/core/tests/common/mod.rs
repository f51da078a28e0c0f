//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use freeze_tag::cnf::{self, Assignment, Clause, MonotoneCnf, NormalizedCnf};
use freeze_tag::schedule::FtpInstance;
use freeze_tag::{Metric, Point3, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random CNF with `vars` in `3..=max_vars` and `0..=max_clauses` clauses.
pub fn seeded_cnf(seed: u64, max_vars: usize, max_clauses: usize) -> MonotoneCnf {
    let mut r = rng(seed);
    let vars = r.gen_range(3..=max_vars);
    let clauses = r.gen_range(0..=max_clauses);
    cnf::random_cnf(&mut r, vars, clauses)
}

/// Every monotone CNF over exactly `vars` variables with at most
/// `max_clauses` clauses, as ordered clause sequences.
pub fn all_cnfs(vars: usize, max_clauses: usize) -> Vec<MonotoneCnf> {
    let mut kinds = Vec::new();
    for a in 1..=vars as u32 {
        for b in a + 1..=vars as u32 {
            for c in b + 1..=vars as u32 {
                kinds.push(Clause::positive([a, b, c]));
                kinds.push(Clause::negative([a, b, c]));
            }
        }
    }
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Clause>> = vec![Vec::new()];
    for _ in 0..max_clauses {
        if kinds.is_empty() {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|prefix| {
                kinds.iter().map(move |k| {
                    let mut next = prefix.clone();
                    next.push(k.clone());
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out.into_iter().map(|cl| MonotoneCnf::new(vars, cl).unwrap()).collect()
}

/// Models of `input`, each carried over to `norm` by the smallest completion
/// of the variables normalization added.
pub fn normalized_models(input: &MonotoneCnf, norm: &NormalizedCnf) -> Vec<Assignment> {
    cnf::all_satisfying(input, cnf::DEFAULT_BRUTE_FORCE_CAP)
        .unwrap()
        .iter()
        .map(|a| cnf::complete_assignment(norm.cnf(), a).unwrap().expect("normalization keeps models"))
        .collect()
}

fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    Rational::new(r.gen_range(-12..=12), *[1, 2, 3, 4].choose(r).unwrap())
}

/// Random instance with 1 to `max_locations` distinct frozen locations,
/// some shared by several robots, and occasionally extra robots at the
/// source's home. Robot ids are shuffled so the source is not always 0.
pub fn random_instance(seed: u64, metric: Metric, max_locations: usize) -> FtpInstance {
    let mut r = rng(seed);
    let point = |r: &mut ChaCha8Rng| Point3::new(small_rational(r), small_rational(r), small_rational(r));
    let source_home = point(&mut r);
    let mut homes = vec![source_home.clone()];
    for _ in 0..r.gen_range(0..=2) {
        if r.gen_bool(0.3) {
            homes.push(source_home.clone());
        }
    }
    let k = r.gen_range(1..=max_locations);
    let mut locations: Vec<Point3> = Vec::new();
    while locations.len() < k {
        let p = point(&mut r);
        if p != source_home && !locations.contains(&p) {
            locations.push(p);
        }
    }
    for p in locations {
        let copies = if r.gen_bool(0.25) { r.gen_range(2..=3) } else { 1 };
        homes.extend(std::iter::repeat_n(p, copies));
    }
    let mut order: Vec<usize> = (0..homes.len()).collect();
    order.shuffle(&mut r);
    let source = order.iter().position(|&i| i == 0).unwrap();
    let shuffled = order.into_iter().map(|i| homes[i].clone()).collect();
    FtpInstance::from_homes(metric, source, shuffled)
}
