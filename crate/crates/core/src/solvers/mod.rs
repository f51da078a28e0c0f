//! Freeze-Tag solvers for small instances.
//!
//! All solvers work on *direct-travel wake trees*: every awake robot moves
//! straight to its next wake target. Frozen robots sharing a home are one
//! location; reaching it wakes all of them at once.
//!
//! * [`solve_exact`]: depth-first branch and bound, optimal.
//! * [`solve_greedy`]: nearest-unclaimed-target heuristic, an upper bound.
//! * [`enumerate_oracle`]: exhaustive recursion over all wake trees, used to
//!   cross-check the exact solver. It shares no search code with it.

mod exact;
mod greedy;
mod oracle;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{distance, Point3};
use crate::schedule::{FtpInstance, Itinerary, RobotId, Schedule, Waypoint};
use crate::Rational;

pub use exact::solve_exact;
pub use greedy::solve_greedy;
pub use oracle::{enumerate_oracle, DEFAULT_ORACLE_CAP};

pub const DEFAULT_LOCATION_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smaller arrival first, then lexicographically smaller point, then smaller robot id.
    #[default]
    LexPointThenId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest number of distinct frozen locations `solve_exact` accepts.
    pub location_cap: usize,
    pub time_budget: Option<Duration>,
    pub tie_break: TieBreak,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { location_cap: DEFAULT_LOCATION_CAP, time_budget: None, tie_break: TieBreak::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub bound_prunes: u64,
    pub symmetry_prunes: u64,
    pub incumbent_updates: u64,
    pub locations: usize,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub schedule: Schedule,
    pub makespan: Rational,
    /// False when the time budget ran out before optimality was proven.
    pub optimal: bool,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{locations} distinct frozen locations exceeds the cap of {cap}")]
    TooLarge { locations: usize, cap: usize },
    #[error("time budget exceeded; best schedule found has makespan {}", .0.makespan)]
    TimeBudgetExceeded(Box<Solution>),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// Instance with frozen robots grouped by home. Location 0 is the source
/// home; `robots_at[0]` holds the other robots sharing it.
#[derive(Debug, Clone)]
pub(crate) struct Locations {
    pub points: Vec<Point3>,
    pub robots_at: Vec<Vec<RobotId>>,
    pub dist: Vec<Vec<Rational>>,
}

impl Locations {
    pub fn new(instance: &FtpInstance) -> Result<Self, SolverError> {
        if instance.source >= instance.robots.len() {
            return Err(SolverError::InvalidInstance(format!("source {} is not a robot", instance.source)));
        }
        let src = instance.source_home().clone();
        let mut points = vec![src];
        let mut robots_at: Vec<Vec<RobotId>> = vec![Vec::new()];
        let mut index = std::collections::HashMap::new();
        index.insert(points[0].clone(), 0usize);
        for r in &instance.robots {
            if r.id == instance.source {
                continue;
            }
            let slot = *index.entry(r.home.clone()).or_insert_with(|| {
                points.push(r.home.clone());
                robots_at.push(Vec::new());
                points.len() - 1
            });
            robots_at[slot].push(r.id);
        }
        let dist = points
            .iter()
            .map(|a| points.iter().map(|b| distance(instance.metric, a, b).into_value()).collect())
            .collect();
        Ok(Locations { points, robots_at, dist })
    }

    /// Number of frozen locations, excluding the source home.
    pub fn frozen(&self) -> usize {
        self.points.len() - 1
    }
}

/// One step of a wake tree: `robot` travels from where it is to location `target`.
pub(crate) type Move = (RobotId, usize);

/// Replays a sequence of moves into a schedule. Every robot's moves must
/// appear after the move that woke it.
pub(crate) fn moves_to_schedule(instance: &FtpInstance, locs: &Locations, moves: &[Move]) -> Schedule {
    let n = instance.robots.len();
    let mut routes: Vec<Vec<Waypoint>> = vec![Vec::new(); n];
    let mut at: Vec<Option<(Rational, usize)>> = vec![None; n];
    let zero = Rational::zero();
    routes[instance.source].push(Waypoint::new(zero.clone(), locs.points[0].clone()));
    at[instance.source] = Some((zero.clone(), 0));
    for &r in &locs.robots_at[0] {
        routes[r].push(Waypoint::new(zero.clone(), locs.points[0].clone()));
        at[r] = Some((zero.clone(), 0));
    }
    for &(robot, target) in moves {
        let (t, from) = at[robot].clone().expect("robot moves only after waking");
        let arrival = t + &locs.dist[from][target];
        routes[robot].push(Waypoint::new(arrival.clone(), locs.points[target].clone()));
        at[robot] = Some((arrival.clone(), target));
        for &r in &locs.robots_at[target] {
            routes[r].push(Waypoint::new(arrival.clone(), locs.points[target].clone()));
            at[r] = Some((arrival.clone(), target));
        }
    }
    Schedule {
        itineraries: routes
            .into_iter()
            .enumerate()
            .map(|(robot, waypoints)| Itinerary { robot, waypoints })
            .collect(),
    }
}

/// Makespan of a move sequence without building the schedule.
pub(crate) fn moves_makespan(locs: &Locations, source: RobotId, moves: &[Move]) -> Rational {
    let mut at: std::collections::HashMap<RobotId, (Rational, usize)> = std::collections::HashMap::new();
    at.insert(source, (Rational::zero(), 0));
    for &r in &locs.robots_at[0] {
        at.insert(r, (Rational::zero(), 0));
    }
    let mut best = Rational::zero();
    for &(robot, target) in moves {
        let (t, from) = at[&robot].clone();
        let arrival = t + &locs.dist[from][target];
        for &r in &locs.robots_at[target] {
            at.insert(r, (arrival.clone(), target));
        }
        at.insert(robot, (arrival.clone(), target));
        best = best.max(arrival);
    }
    best
}
