use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use super::{moves_makespan, moves_to_schedule, Locations, Move, SearchStats, Solution, SolverError};
use crate::schedule::{FtpInstance, RobotId};
use crate::Rational;

/// Event-driven nearest-target heuristic.
///
/// The earliest free agent (ties: smaller robot id) claims the nearest
/// unclaimed location (ties: lexicographically smaller point) and travels
/// there; on arrival it and every robot homed there become free agents.
/// Agents left over once every location is claimed stay put.
pub fn solve_greedy(instance: &FtpInstance) -> Result<Solution, SolverError> {
    let start = std::time::Instant::now();
    let locs = Locations::new(instance)?;
    let moves = greedy_moves(instance, &locs);
    let makespan = moves_makespan(&locs, instance.source, &moves);
    let schedule = moves_to_schedule(instance, &locs, &moves);
    let stats = SearchStats {
        nodes: moves.len() as u64,
        locations: locs.frozen(),
        elapsed_ms: start.elapsed().as_millis(),
        ..SearchStats::default()
    };
    Ok(Solution { schedule, makespan, optimal: false, stats })
}

pub(crate) fn greedy_moves(instance: &FtpInstance, locs: &Locations) -> Vec<Move> {
    let mut free: BinaryHeap<Reverse<(Rational, RobotId, usize)>> = BinaryHeap::new();
    free.push(Reverse((Rational::zero(), instance.source, 0)));
    for &r in &locs.robots_at[0] {
        free.push(Reverse((Rational::zero(), r, 0)));
    }
    let mut unclaimed: BTreeSet<usize> = (1..locs.points.len()).collect();
    let mut moves = Vec::new();
    while !unclaimed.is_empty() {
        let Some(Reverse((t, robot, loc))) = free.pop() else { break };
        let target = *unclaimed
            .iter()
            .min_by(|&&a, &&b| match locs.dist[loc][a].cmp(&locs.dist[loc][b]) {
                Ordering::Equal => locs.points[a].cmp(&locs.points[b]),
                other => other,
            })
            .expect("nonempty");
        unclaimed.remove(&target);
        let arrival = t + &locs.dist[loc][target];
        moves.push((robot, target));
        free.push(Reverse((arrival.clone(), robot, target)));
        for &r in &locs.robots_at[target] {
            free.push(Reverse((arrival.clone(), r, target)));
        }
    }
    moves
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Metric, Point3};
    use crate::schedule::validate;

    fn solve(homes: Vec<Point3>) -> Solution {
        let inst = FtpInstance::from_homes(Metric::L1, 0, homes);
        let sol = solve_greedy(&inst).unwrap();
        let rep = validate(&inst, &sol.schedule, None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert_eq!(rep.makespan, sol.makespan);
        sol
    }

    #[test]
    fn line_same_side() {
        let sol = solve(vec![Point3::origin(), Point3::int(1, 0, 0), Point3::int(2, 0, 0)]);
        assert_eq!(sol.makespan, Rational::from_integer(2));
    }

    #[test]
    fn line_both_sides_breaks_tie_lexicographically() {
        let sol = solve(vec![Point3::origin(), Point3::int(1, 0, 0), Point3::int(-1, 0, 0)]);
        assert_eq!(sol.makespan, Rational::from_integer(3));
        // The source goes to (-1,0,0) first.
        let src = sol.schedule.itinerary(0).unwrap();
        assert_eq!(src.waypoints[1].pos, Point3::int(-1, 0, 0));
    }

    #[test]
    fn nothing_frozen() {
        let sol = solve(vec![Point3::int(1, 2, 3)]);
        assert_eq!(sol.makespan, Rational::zero());
    }

    #[test]
    fn co_located_robots_become_agents() {
        // Two robots at (1,0,0) then two far targets in opposite directions.
        let sol = solve(vec![
            Point3::origin(),
            Point3::int(1, 0, 0),
            Point3::int(1, 0, 0),
            Point3::int(1, 5, 0),
            Point3::int(1, -5, 0),
            Point3::int(11, 0, 0),
        ]);
        assert_eq!(sol.makespan, Rational::from_integer(11));
    }
}
