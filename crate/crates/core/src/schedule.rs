//! Freeze-Tag instances, awakening schedules and the schedule validator.
//!
//! A schedule gives every robot a timed waypoint itinerary whose first entry
//! is `(activation time, home)`. Robots move at speed at most one between
//! waypoints. A frozen robot's activation must be justified by an awake robot
//! that has a waypoint exactly at the frozen robot's home at that instant;
//! passing through a home without such a waypoint wakes nobody.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{distance, Metric, Point3};
use crate::Rational;

pub type RobotId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Robot {
    pub id: RobotId,
    #[serde(rename = "pos")]
    pub home: Point3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FtpInstance {
    pub metric: Metric,
    pub source: RobotId,
    pub robots: Vec<Robot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<Rational>,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("invalid role table: {0}")]
    Roles(String),
}

impl FtpInstance {
    /// Instance whose robot ids are their positions in `homes`.
    pub fn from_homes(metric: Metric, source: RobotId, homes: Vec<Point3>) -> Self {
        let robots = homes.into_iter().enumerate().map(|(id, home)| Robot { id, home }).collect();
        FtpInstance { metric, source, robots, deadline: None }
    }

    pub fn len(&self) -> usize {
        self.robots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.robots.is_empty()
    }

    pub fn home(&self, id: RobotId) -> &Point3 {
        &self.robots[id].home
    }

    pub fn source_home(&self) -> &Point3 {
        self.home(self.source)
    }

    /// Ids must be dense and listed in order; the source must exist.
    pub fn check(&self) -> Result<(), FormatError> {
        if let Some((i, r)) = self.robots.iter().enumerate().find(|(i, r)| r.id != *i) {
            return Err(FormatError::Instance(format!("robot at position {i} has id {}", r.id)));
        }
        if self.source >= self.robots.len() {
            return Err(FormatError::Instance(format!("source {} is not a robot id", self.source)));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let inst: FtpInstance = serde_json::from_str(text)?;
        inst.check()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    #[serde(rename = "t")]
    pub time: Rational,
    pub pos: Point3,
}

impl Waypoint {
    pub fn new(time: Rational, pos: Point3) -> Self {
        Waypoint { time, pos }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Itinerary {
    pub robot: RobotId,
    pub waypoints: Vec<Waypoint>,
}

impl Itinerary {
    pub fn activation(&self) -> Option<&Rational> {
        self.waypoints.first().map(|w| &w.time)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub itineraries: Vec<Itinerary>,
}

impl Schedule {
    pub fn itinerary(&self, robot: RobotId) -> Option<&Itinerary> {
        self.itineraries.iter().find(|it| it.robot == robot)
    }

    /// Activation time of `robot` (its first waypoint time).
    pub fn activation(&self, robot: RobotId) -> Option<&Rational> {
        self.itinerary(robot).and_then(Itinerary::activation)
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schedule serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("robot {0} has an empty itinerary")]
    BadItinerary(RobotId),
}

/// Latest activation time over all robots.
pub fn makespan(sched: &Schedule) -> Result<Rational, ScheduleError> {
    let mut best = Rational::zero();
    for it in &sched.itineraries {
        let t = it.activation().ok_or(ScheduleError::BadItinerary(it.robot))?;
        if *t > best {
            best = t.clone();
        }
    }
    Ok(best)
}

/// Largest distance from the source home to any frozen robot. No schedule can
/// finish earlier, since the waker chain of every robot starts at the source.
pub fn lower_bound(instance: &FtpInstance) -> Rational {
    let src = instance.source_home();
    instance
        .robots
        .iter()
        .filter(|r| r.id != instance.source)
        .map(|r| distance(instance.metric, src, &r.home).into_value())
        .fold(Rational::zero(), Rational::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationKind {
    BadItinerary,
    SpeedViolation,
    UnjustifiedActivation,
    CyclicJustification,
    DeadlineExceeded,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub robot: RobotId,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub makespan: Rational,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Slack allowed on Euclidean speed checks.
pub fn l2_tolerance() -> Rational {
    Rational::new(1, 1_000_000_000)
}

/// Checks `sched` against `instance`.
///
/// Runs in time linear in the number of waypoints plus robots (hash lookups
/// on exact coordinates); no search is involved.
pub fn validate(instance: &FtpInstance, sched: &Schedule, deadline: Option<&Rational>) -> ValidationReport {
    let n = instance.robots.len();
    let mut violations = Vec::new();
    let mut push = |robot, kind, detail: String| violations.push(Violation { robot, kind, detail });
    let tolerance = (!instance.metric.is_exact()).then(l2_tolerance);

    // (1) one well-formed itinerary per robot, respecting unit speed.
    let mut by_robot: Vec<Option<&Itinerary>> = vec![None; n];
    for it in &sched.itineraries {
        match by_robot.get_mut(it.robot) {
            None => push(it.robot, ViolationKind::BadItinerary, format!("unknown robot {}", it.robot)),
            Some(Some(_)) => push(it.robot, ViolationKind::BadItinerary, "duplicate itinerary".into()),
            Some(slot) => *slot = Some(it),
        }
    }
    let mut activation: Vec<Option<Rational>> = vec![None; n];
    for id in 0..n {
        let Some(it) = by_robot[id] else {
            push(id, ViolationKind::BadItinerary, "missing itinerary".into());
            continue;
        };
        let Some(first) = it.waypoints.first() else {
            push(id, ViolationKind::BadItinerary, "empty itinerary".into());
            continue;
        };
        activation[id] = Some(first.time.clone());
        let home = instance.home(id);
        if first.pos != *home {
            push(id, ViolationKind::BadItinerary, format!("starts at {} instead of home {}", first.pos, home));
        }
        if first.time.is_negative() {
            push(id, ViolationKind::BadItinerary, format!("negative activation time {}", first.time));
        }
        if id == instance.source && !first.time.is_zero() {
            push(id, ViolationKind::BadItinerary, format!("source starts at time {} instead of 0", first.time));
        }
        for (step, pair) in it.waypoints.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            let dt = &b.time - &a.time;
            if dt.is_negative() {
                push(
                    id,
                    ViolationKind::BadItinerary,
                    format!("waypoint {} at time {} precedes previous time {}", step + 1, b.time, a.time),
                );
                continue;
            }
            let d = distance(instance.metric, &a.pos, &b.pos).into_value();
            let allowed = match &tolerance {
                Some(tol) => &dt + tol,
                None => dt.clone(),
            };
            if d > allowed {
                push(
                    id,
                    ViolationKind::SpeedViolation,
                    format!("leg {} -> {} covers {} in {} (from t={} to t={})", a.pos, b.pos, d, dt, a.time, b.time),
                );
            }
        }
    }

    // (2) every frozen robot is reached by some waypoint exactly at its wake event.
    let mut visits: HashMap<(&Point3, &Rational), Vec<RobotId>> = HashMap::new();
    for (id, it) in by_robot.iter().enumerate() {
        for w in it.iter().flat_map(|it| &it.waypoints) {
            visits.entry((&w.pos, &w.time)).or_default().push(id);
        }
    }
    let mut waker: Vec<Option<RobotId>> = vec![None; n];
    for id in 0..n {
        if id == instance.source {
            continue;
        }
        let Some(t) = &activation[id] else { continue };
        let chosen = visits
            .get(&(instance.home(id), t))
            .into_iter()
            .flatten()
            .copied()
            .filter(|&w| w != id)
            .filter_map(|w| activation[w].as_ref().map(|a| (a, w != instance.source, w)))
            .min();
        match chosen {
            Some((_, _, w)) => waker[id] = Some(w),
            None => push(
                id,
                ViolationKind::UnjustifiedActivation,
                format!("no awake robot reaches home {} at time {}", instance.home(id), t),
            ),
        }
    }

    // (3) the waker relation is a tree rooted at the source, ordered in time.
    let mut state = vec![0u8; n]; // 0 unseen, 1 on stack, 2 done
    let mut in_cycle = vec![false; n];
    for start in 0..n {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(v) = cur {
            match state[v] {
                2 => break,
                1 => {
                    let pos = path.iter().position(|&p| p == v).expect("on current path");
                    for &u in &path[pos..] {
                        in_cycle[u] = true;
                    }
                    break;
                }
                _ => {
                    state[v] = 1;
                    path.push(v);
                    cur = waker[v];
                }
            }
        }
        for v in path {
            state[v] = 2;
        }
    }
    for id in 0..n {
        let Some(w) = waker[id] else { continue };
        if in_cycle[id] {
            push(id, ViolationKind::CyclicJustification, format!("waker chain through robot {w} loops back"));
            continue;
        }
        let (Some(aw), Some(af)) = (&activation[w], &activation[id]) else { continue };
        let source_at_start = w == instance.source && af.is_zero();
        if !(aw < af || source_at_start) {
            push(
                id,
                ViolationKind::UnjustifiedActivation,
                format!("waker {w} is only active from {aw}, not before {af}"),
            );
        }
    }

    // (4) deadline.
    if let Some(limit) = deadline {
        for (id, a) in activation.iter().enumerate() {
            if let Some(a) = a.as_ref().filter(|a| *a > limit) {
                push(id, ViolationKind::DeadlineExceeded, format!("activated at {a}, deadline {limit}"));
            }
        }
    }

    let makespan = activation.iter().flatten().cloned().fold(Rational::zero(), Rational::max);
    violations.sort_by(|a, b| a.kind.cmp(&b.kind).then(a.robot.cmp(&b.robot)));
    ValidationReport { valid: violations.is_empty(), makespan, violations }
}
