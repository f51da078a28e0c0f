//! Depth-first branch and bound over direct-travel wake trees.
//!
//! A node holds the free agents `(time, location, robot)` and the set of
//! unwoken locations. The earliest free agent (ties: location, then robot)
//! either travels to an unwoken location or retires. Processing agents in
//! time order generates each wake tree once; agents with identical time and
//! location are interchangeable, so their choices are forced to be
//! increasing (retiring counts as the largest choice).
//!
//! Direct travel loses nothing: by the triangle inequality, replacing any
//! route between two wake events with a straight move never delays a wake.
//!
//! A node is pruned when `max(current makespan, max over unwoken locations of
//! min over agents of (agent time + distance))` cannot beat the incumbent,
//! which starts as the greedy schedule.

use std::time::Instant;

use super::greedy::greedy_moves;
use super::{
    moves_makespan, moves_to_schedule, Locations, Move, SearchStats, Solution, SolverConfig, SolverError,
};
use crate::schedule::{FtpInstance, RobotId};
use crate::Rational;

const RETIRE: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Agent {
    time: Rational,
    loc: usize,
    robot: RobotId,
}

struct Search<'a> {
    locs: &'a Locations,
    best: Rational,
    best_moves: Vec<Move>,
    path: Vec<Move>,
    stats: SearchStats,
    started: Instant,
    budget: Option<std::time::Duration>,
    timed_out: bool,
}

impl Search<'_> {
    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if let Some(budget) = self.budget {
            if self.stats.nodes % 256 == 1 && self.started.elapsed() > budget {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    /// Lower bound on the makespan of any completion of this node.
    fn bound(&self, agents: &[Agent], remaining: u64, current: &Rational) -> Option<Rational> {
        let mut lb = current.clone();
        for target in bits(remaining) {
            let earliest = agents
                .iter()
                .map(|a| &a.time + &self.locs.dist[a.loc][target])
                .min()?;
            if earliest > lb {
                lb = earliest;
            }
        }
        Some(lb)
    }

    fn dfs(&mut self, agents: &mut Vec<Agent>, remaining: u64, current: Rational, prev: Option<(Rational, usize, usize)>) {
        self.stats.nodes += 1;
        if remaining == 0 {
            self.stats.leaves += 1;
            if current < self.best {
                self.best = current;
                self.best_moves = self.path.clone();
                self.stats.incumbent_updates += 1;
            }
            return;
        }
        if self.out_of_time() {
            return;
        }
        match self.bound(agents, remaining, &current) {
            Some(lb) if lb < self.best => {}
            _ => {
                self.stats.bound_prunes += 1;
                return;
            }
        }

        let pick = (0..agents.len())
            .min_by(|&i, &j| {
                let (a, b) = (&agents[i], &agents[j]);
                a.time.cmp(&b.time).then(a.loc.cmp(&b.loc)).then(a.robot.cmp(&b.robot))
            })
            .expect("bound is None for no agents");
        let agent = agents.swap_remove(pick);
        let floor = match &prev {
            Some((t, loc, choice)) if *t == agent.time && *loc == agent.loc => Some(*choice),
            _ => None,
        };

        let mut targets: Vec<usize> = bits(remaining)
            .filter(|&t| floor.is_none_or(|f| f != RETIRE && t > f))
            .collect();
        self.stats.symmetry_prunes += (bits(remaining).count() - targets.len()) as u64;
        targets.sort_by(|&a, &b| {
            self.locs.dist[agent.loc][a].cmp(&self.locs.dist[agent.loc][b]).then(a.cmp(&b))
        });

        for target in targets {
            let arrival = &agent.time + &self.locs.dist[agent.loc][target];
            if arrival >= self.best {
                self.stats.bound_prunes += 1;
                continue;
            }
            let base = agents.len();
            agents.push(Agent { time: arrival.clone(), loc: target, robot: agent.robot });
            for &r in &self.locs.robots_at[target] {
                agents.push(Agent { time: arrival.clone(), loc: target, robot: r });
            }
            self.path.push((agent.robot, target));
            let next = current.clone().max(arrival);
            self.dfs(agents, remaining & !(1u64 << target), next, Some((agent.time.clone(), agent.loc, target)));
            self.path.pop();
            agents.truncate(base);
            if self.timed_out {
                break;
            }
        }

        if !self.timed_out && !agents.is_empty() {
            self.dfs(agents, remaining, current, Some((agent.time.clone(), agent.loc, RETIRE)));
        }

        agents.push(agent);
        let last = agents.len() - 1;
        agents.swap(pick, last);
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Optimal schedule by branch and bound.
///
/// Fails with [`SolverError::TooLarge`] above `cfg.location_cap` distinct
/// frozen locations. When `cfg.time_budget` runs out, the best schedule found
/// so far is returned inside [`SolverError::TimeBudgetExceeded`].
pub fn solve_exact(instance: &FtpInstance, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    let started = Instant::now();
    let locs = Locations::new(instance)?;
    let frozen = locs.frozen();
    if frozen > cfg.location_cap || frozen > 63 {
        return Err(SolverError::TooLarge { locations: frozen, cap: cfg.location_cap.min(63) });
    }

    let greedy = greedy_moves(instance, &locs);
    let mut search = Search {
        locs: &locs,
        best: moves_makespan(&locs, instance.source, &greedy),
        best_moves: greedy,
        path: Vec::new(),
        stats: SearchStats { locations: frozen, ..SearchStats::default() },
        started,
        budget: cfg.time_budget,
        timed_out: false,
    };
    let zero = Rational::zero();
    let mut agents = vec![Agent { time: zero.clone(), loc: 0, robot: instance.source }];
    agents.extend(locs.robots_at[0].iter().map(|&r| Agent { time: zero.clone(), loc: 0, robot: r }));
    let all: u64 = (1..=frozen).fold(0, |m, i| m | 1 << i);
    search.dfs(&mut agents, all, zero, None);

    search.stats.elapsed_ms = started.elapsed().as_millis();
    let solution = Solution {
        schedule: moves_to_schedule(instance, &locs, &search.best_moves),
        makespan: search.best,
        optimal: !search.timed_out,
        stats: search.stats,
    };
    if search.timed_out {
        Err(SolverError::TimeBudgetExceeded(Box::new(solution)))
    } else {
        Ok(solution)
    }
}
