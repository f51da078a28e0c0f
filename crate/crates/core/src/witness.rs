//! Builds the makespan-`L` schedule of a reduced instance from a satisfying
//! assignment.
//!
//! Each origin robot `R(i)` first visits the group of the literal made true by
//! the assignment, then the opposite group, then `S(i)`. Members of the group
//! visited first ("first batch") wake their occurrence robot `C` at `4+eps`
//! and continue straight on to `D`; the woken `C` robots run to their clause
//! robot, arriving at exactly `L`. Second-batch members only reach `C` at
//! `4+3eps`, too late for any clause robot, so those `C` robots wake `D`
//! instead.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::cnf::{Assignment, NormalizedCnf, Polarity};
use crate::geometry::Point3;
use crate::reduction::{group_point, point_of_role, ReductionConstants, Role, RoleTable};
use crate::schedule::{Itinerary, RobotId, Schedule, Waypoint};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("assignment does not satisfy the formula")]
    NotSatisfying,
    #[error("role table does not match the formula: {0}")]
    RoleMismatch(String),
}

/// Wake and arrival times of each role class in the witness schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTimeline {
    pub r_wake: Rational,
    pub first_group: Rational,
    pub second_group: Rational,
    pub first_batch_c: Rational,
    pub second_batch_c: Rational,
    pub first_batch_d: Rational,
    pub clause: Rational,
    pub second_batch_d: Rational,
    pub s: Rational,
}

impl WitnessTimeline {
    pub fn new(c: &ReductionConstants) -> Self {
        let eps = &c.epsilon;
        WitnessTimeline {
            r_wake: Rational::zero(),
            first_group: eps + 2,
            second_group: eps * 3 + 2,
            first_batch_c: eps + 4,
            second_batch_c: eps * 3 + 4,
            first_batch_d: &c.l - eps * 2,
            clause: c.l.clone(),
            second_batch_d: c.l.clone(),
            s: c.l.clone(),
        }
    }

    pub fn entries(&self) -> [&Rational; 9] {
        [
            &self.r_wake,
            &self.first_group,
            &self.second_group,
            &self.first_batch_c,
            &self.second_batch_c,
            &self.first_batch_d,
            &self.clause,
            &self.second_batch_d,
            &self.s,
        ]
    }
}

pub fn build_witness(
    cnf: &NormalizedCnf,
    assignment: &Assignment,
    roles: &RoleTable,
    c: &ReductionConstants,
) -> Result<Schedule, WitnessError> {
    if !cnf.cnf().evaluate(assignment).map_err(|_| WitnessError::NotSatisfying)? {
        return Err(WitnessError::NotSatisfying);
    }
    if c.n != cnf.var_count() || c.m != cnf.clause_count() {
        return Err(WitnessError::RoleMismatch(format!(
            "constants are for n={}, m={} but formula has n={}, m={}",
            c.n,
            c.m,
            cnf.var_count(),
            cnf.clause_count()
        )));
    }
    let expected = RoleTable::for_cnf(cnf);
    if *roles != expected {
        let at = roles.roles().iter().zip(expected.roles()).position(|(a, b)| a != b);
        return Err(WitnessError::RoleMismatch(match at {
            Some(id) => format!("robot {id} has role {:?}, expected {:?}", roles.roles()[id], expected.roles()[id]),
            None => format!("{} roles, expected {}", roles.len(), expected.len()),
        }));
    }

    let tl = WitnessTimeline::new(c);
    let index: HashMap<Role, RobotId> = roles.iter().map(|(id, role)| (role, id)).collect();
    let id = |role: Role| index[&role];
    let homes: HashMap<Role, Point3> = roles
        .iter()
        .map(|(_, role)| (role, point_of_role(role, c).expect("roles derived from the formula are in range")))
        .collect();
    let at = |role: Role| homes[&role].clone();
    let mut routes: Vec<Vec<Waypoint>> = vec![Vec::new(); roles.len()];
    let mut leg = |robot: RobotId, t: &Rational, pos: Point3| routes[robot].push(Waypoint::new(t.clone(), pos));

    // Occurrence robots of each clause, split by whether their literal is true.
    // Keys iterate in (variable, clause) order, so the first first-batch entry
    // per clause is the designated justifier of its clause robot.
    let mut occurrences: BTreeMap<(usize, Polarity, usize), bool> = BTreeMap::new();
    for (polarity, k, clause) in cnf.indexed_clauses() {
        for v in clause.vars() {
            let first_batch = assignment.value(v) == polarity.satisfied_by();
            occurrences.insert((v as usize, polarity, k), first_batch);
        }
    }

    for i in 1..=c.n {
        let r = id(Role::R(i));
        let first = if assignment.value(i as u32) { Polarity::Positive } else { Polarity::Negative };
        leg(r, &tl.r_wake, at(Role::R(i)));
        leg(r, &tl.first_group, group_point(i, first, c));
        leg(r, &tl.second_group, group_point(i, first.opposite(), c));
        leg(r, &tl.s, at(Role::S(i)));
        leg(id(Role::S(i)), &tl.s, at(Role::S(i)));
    }

    for (&(var, polarity, clause), &first_batch) in &occurrences {
        let member = id(Role::GroupMember { var, polarity, clause });
        let occ_c = Role::OccC { var, polarity, clause };
        let occ_d = Role::OccD { var, polarity, clause };
        let group = Role::GroupMember { var, polarity, clause };
        let (wake, c_time) = if first_batch {
            (&tl.first_group, &tl.first_batch_c)
        } else {
            (&tl.second_group, &tl.second_batch_c)
        };
        leg(member, wake, at(group));
        leg(member, c_time, at(occ_c));
        leg(id(occ_c), c_time, at(occ_c));
        if first_batch {
            leg(member, &tl.first_batch_d, at(occ_d));
            leg(id(occ_d), &tl.first_batch_d, at(occ_d));
            leg(id(occ_c), &tl.clause, at(Role::Clause { polarity, clause }));
        } else {
            leg(id(occ_c), &tl.second_batch_d, at(occ_d));
            leg(id(occ_d), &tl.second_batch_d, at(occ_d));
        }
    }

    for (polarity, clause, _) in cnf.indexed_clauses() {
        let role = Role::Clause { polarity, clause };
        leg(id(role), &tl.clause, at(role));
    }

    let itineraries = routes
        .into_iter()
        .enumerate()
        .map(|(robot, waypoints)| Itinerary { robot, waypoints })
        .collect();
    Ok(Schedule { itineraries })
}
