//! Exhaustive optimum over all direct-travel wake trees.
//!
//! `cost(v, k, S)` is the least time for `k` agents standing together at
//! location `v` to wake every location in `S`:
//!
//! * `cost(v, k, {}) = 0`
//! * `cost(v, 1, S) = min over u in S of d(v, u) + cost(u, 1 + mult(u), S - {u})`
//! * `cost(v, k, S) = min over A subset of S of max(cost(v, 1, A), cost(v, k-1, S - A))`
//!
//! Every wake tree is one choice at each level of this recursion, so the
//! minimum ranges over all of them. Results are memoized but nothing is cut
//! off by bounds. This module deliberately does not use the solvers' shared
//! location table.

use std::collections::HashMap;

use super::SolverError;
use crate::geometry::{distance, Point3};
use crate::schedule::FtpInstance;
use crate::Rational;

pub const DEFAULT_ORACLE_CAP: usize = 8;

struct Oracle {
    dist: Vec<Vec<Rational>>,
    woken_at: Vec<usize>,
    memo: HashMap<(usize, usize, u32), Rational>,
}

impl Oracle {
    fn cost(&mut self, v: usize, k: usize, set: u32) -> Rational {
        if set == 0 {
            return Rational::zero();
        }
        // Agents beyond one per target can only idle.
        let k = k.min(set.count_ones() as usize);
        if let Some(hit) = self.memo.get(&(v, k, set)) {
            return hit.clone();
        }
        let best = if k == 1 {
            let mut best: Option<Rational> = None;
            for u in members(set) {
                let rest = set & !(1 << u);
                let after = self.cost(u, 1 + self.woken_at[u], rest);
                let total = after + &self.dist[v][u];
                if best.as_ref().is_none_or(|b| total < *b) {
                    best = Some(total);
                }
            }
            best.expect("nonempty set")
        } else {
            let mut best: Option<Rational> = None;
            // Enumerate every subset `a` of `set` for the first agent.
            let mut a = set;
            loop {
                let total = self.cost(v, 1, a).max(self.cost(v, k - 1, set & !a));
                if best.as_ref().is_none_or(|b| total < *b) {
                    best = Some(total);
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & set;
            }
            best.expect("at least the empty split")
        };
        self.memo.insert((v, k, set), best.clone());
        best
    }
}

fn members(set: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| set >> i & 1 == 1)
}

/// Minimum makespan over all direct-travel wake trees of `instance`.
pub fn enumerate_oracle(instance: &FtpInstance, cap: usize) -> Result<Rational, SolverError> {
    let source = instance
        .robots
        .get(instance.source)
        .ok_or_else(|| SolverError::InvalidInstance(format!("source {} is not a robot", instance.source)))?;
    let mut places: Vec<Point3> = vec![source.home.clone()];
    let mut woken_at: Vec<usize> = vec![0];
    for r in instance.robots.iter().filter(|r| r.id != instance.source) {
        match places.iter().position(|p| *p == r.home) {
            Some(i) => woken_at[i] += 1,
            None => {
                places.push(r.home.clone());
                woken_at.push(1);
            }
        }
    }
    let frozen = places.len() - 1;
    if frozen > cap || frozen > 31 {
        return Err(SolverError::TooLarge { locations: frozen, cap: cap.min(31) });
    }
    let dist = places
        .iter()
        .map(|a| places.iter().map(|b| distance(instance.metric, a, b).into_value()).collect())
        .collect();
    let mut oracle = Oracle { dist, woken_at, memo: HashMap::new() };
    let all: u32 = (1..=frozen).fold(0, |m, i| m | 1 << i);
    let agents = 1 + oracle.woken_at[0];
    Ok(oracle.cost(0, agents, all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{l1, Metric};

    fn oracle(homes: Vec<Point3>) -> Rational {
        enumerate_oracle(&FtpInstance::from_homes(Metric::L1, 0, homes), DEFAULT_ORACLE_CAP).unwrap()
    }

    #[test]
    fn line_instances() {
        // Same side: source -> 1 -> 2 takes 2.
        assert_eq!(oracle(vec![Point3::origin(), Point3::int(1, 0, 0), Point3::int(2, 0, 0)]), 2.into());
        // Opposite sides: the three wake orders give 1+2 = 3 either way.
        assert_eq!(oracle(vec![Point3::origin(), Point3::int(1, 0, 0), Point3::int(-1, 0, 0)]), 3.into());
    }

    #[test]
    fn single_robot_and_co_located_pair() {
        let p = Point3::int(2, -3, 5);
        assert_eq!(oracle(vec![Point3::origin(), p.clone()]), l1(&Point3::origin(), &p));
        assert_eq!(oracle(vec![Point3::origin(), Point3::int(1, 0, 0), Point3::int(1, 0, 0)]), 1.into());
        assert_eq!(oracle(vec![Point3::origin()]), 0.into());
    }

    #[test]
    fn extra_robots_at_source_help() {
        // Two robots at the origin can split to opposite targets.
        let homes = vec![Point3::origin(), Point3::origin(), Point3::int(1, 0, 0), Point3::int(-1, 0, 0)];
        assert_eq!(oracle(homes), 1.into());
    }

    #[test]
    fn cap_enforced() {
        let homes: Vec<Point3> = (0..10).map(|i| Point3::int(i, 0, 0)).collect();
        let inst = FtpInstance::from_homes(Metric::L1, 0, homes);
        assert_eq!(enumerate_oracle(&inst, 8), Err(SolverError::TooLarge { locations: 9, cap: 8 }));
    }
}
