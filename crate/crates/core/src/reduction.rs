//! Compiles a normalized monotone 3-CNF into a 3D L1 Freeze-Tag instance.
//!
//! With `n` variables, `m` clauses, `alpha = 2/(n-1)`, `beta = 2/(m-2)`,
//! `eps = alpha/8` and `L = 6 + eps`, the instance places:
//!
//! * `n` robots at the origin (robot 0 is the source);
//! * for variable `i` (with `j = i-1`) a true group at
//!   `T_i = (2 - j*alpha, j*alpha, eps)` and a false group at `F_i`, its
//!   mirror in `z`, holding one robot per positive / negative occurrence;
//! * a robot `S_i = (2 - j*alpha + h, j*alpha + h, 0)` with `h = (L-2-4eps)/2`;
//! * for each occurrence of variable `i` in the `k`-th clause of a polarity,
//!   an occurrence robot `C` at the group point plus
//!   `(b, b, +-(2 - 2b))` (`b = (k-1)*beta`) and a partner `D = C +- P`,
//!   `P = (0, 0, L - 4 - 3eps)`;
//! * one clause robot per clause at the middle variable's `C` point plus
//!   `Q = (1, 1, 0)`.
//!
//! Every clause robot is at distance exactly `L` from the origin, which is the
//! makespan threshold of the produced instance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{NormalizedCnf, Polarity};
use crate::geometry::{Metric, Point3};
use crate::schedule::{FormatError, FtpInstance, Robot, RobotId};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("role index out of range: {0:?}")]
    IndexOutOfRange(Role),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionConstants {
    pub n: usize,
    pub m: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub epsilon: Rational,
    /// The makespan threshold `6 + eps`.
    pub l: Rational,
    pub p: Point3,
    pub q: Point3,
}

impl ReductionConstants {
    pub fn new(n: usize, m: usize) -> Result<Self, ReductionError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(ReductionError::BadShape(format!("n = {n} must be odd and greater than 1")));
        }
        if m < 4 || m % 2 == 1 {
            return Err(ReductionError::BadShape(format!("m = {m} must be even and greater than 2")));
        }
        let alpha = Rational::new(2, n as i64 - 1);
        let beta = Rational::new(2, m as i64 - 2);
        let epsilon = &alpha / 8;
        let l = &epsilon + 6;
        let pz = &l - 4 - &epsilon * 3;
        Ok(ReductionConstants {
            n,
            m,
            p: Point3::new(Rational::zero(), Rational::zero(), pz),
            q: Point3::int(1, 1, 0),
            alpha,
            beta,
            epsilon,
            l,
        })
    }

    /// Clauses per polarity.
    pub fn half(&self) -> usize {
        self.m / 2
    }

    /// 1-based index of the variable whose occurrence point anchors clause robots.
    pub fn anchor_var(&self) -> usize {
        self.n.div_ceil(2)
    }
}

pub fn constants(n: usize, m: usize) -> Result<ReductionConstants, ReductionError> {
    ReductionConstants::new(n, m)
}

/// What a robot stands for in the reduced instance. Variable and clause
/// indices are 1-based; clause `k` counts within its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// One of the robots starting at the origin; `R(1)` is the source.
    R(usize),
    S(usize),
    /// Member of the true (positive) or false (negative) group of `var`,
    /// earmarked for its occurrence in clause `clause`.
    GroupMember { var: usize, polarity: Polarity, clause: usize },
    OccC { var: usize, polarity: Polarity, clause: usize },
    OccD { var: usize, polarity: Polarity, clause: usize },
    Clause { polarity: Polarity, clause: usize },
}

/// Group point of variable `var`: `T_var` for positive, `F_var` for negative.
pub fn group_point(var: usize, polarity: Polarity, c: &ReductionConstants) -> Point3 {
    let ja = &c.alpha * (var as i64 - 1);
    let z = match polarity {
        Polarity::Positive => c.epsilon.clone(),
        Polarity::Negative => -&c.epsilon,
    };
    Point3::new(Rational::from_integer(2) - &ja, ja, z)
}

fn occ_c_point(var: usize, polarity: Polarity, clause: usize, c: &ReductionConstants) -> Point3 {
    let b = &c.beta * (clause as i64 - 1);
    let rise = Rational::from_integer(2) - &b * 2;
    let dz = match polarity {
        Polarity::Positive => rise,
        Polarity::Negative => -rise,
    };
    &group_point(var, polarity, c) + &Point3::new(b.clone(), b, dz)
}

pub fn point_of_role(role: Role, c: &ReductionConstants) -> Result<Point3, ReductionError> {
    let var_ok = |v: usize| (1..=c.n).contains(&v);
    let clause_ok = |k: usize| (1..=c.half()).contains(&k);
    let in_range = match role {
        Role::R(i) | Role::S(i) => var_ok(i),
        Role::GroupMember { var, clause, .. } | Role::OccC { var, clause, .. } | Role::OccD { var, clause, .. } => {
            var_ok(var) && clause_ok(clause)
        }
        Role::Clause { clause, .. } => clause_ok(clause),
    };
    if !in_range {
        return Err(ReductionError::IndexOutOfRange(role));
    }
    Ok(match role {
        Role::R(_) => Point3::origin(),
        Role::S(i) => {
            let ja = &c.alpha * (i as i64 - 1);
            let h = (&c.l - 2 - &c.epsilon * 4) / 2;
            Point3::new(Rational::from_integer(2) - &ja + &h, ja + h, Rational::zero())
        }
        Role::GroupMember { var, polarity, .. } => group_point(var, polarity, c),
        Role::OccC { var, polarity, clause } => occ_c_point(var, polarity, clause, c),
        Role::OccD { var, polarity, clause } => {
            let cp = occ_c_point(var, polarity, clause, c);
            match polarity {
                Polarity::Positive => &cp + &c.p,
                Polarity::Negative => &cp - &c.p,
            }
        }
        Role::Clause { polarity, clause } => &occ_c_point(c.anchor_var(), polarity, clause, c) + &c.q,
    })
}

/// Robot id to role, indexed by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleTable(Vec<Role>);

impl RoleTable {
    pub fn new(roles: Vec<Role>) -> Self {
        RoleTable(roles)
    }

    /// Roles implied by `cnf` in robot-id order: `R(1..n)`, `S(1..n)`, then per
    /// clause its group members, occurrence `C`s and `D`s (variable ascending),
    /// and finally every clause robot in clause order.
    pub fn for_cnf(cnf: &NormalizedCnf) -> Self {
        let n = cnf.var_count();
        let mut roles: Vec<Role> = (1..=n).map(Role::R).chain((1..=n).map(Role::S)).collect();
        for (polarity, clause, cl) in cnf.indexed_clauses() {
            let vars = cl.vars().map(|v| v as usize);
            roles.extend(vars.iter().map(|&var| Role::GroupMember { var, polarity, clause }));
            roles.extend(vars.iter().map(|&var| Role::OccC { var, polarity, clause }));
            roles.extend(vars.iter().map(|&var| Role::OccD { var, polarity, clause }));
        }
        roles.extend(cnf.indexed_clauses().map(|(polarity, clause, _)| Role::Clause { polarity, clause }));
        RoleTable(roles)
    }

    pub fn roles(&self) -> &[Role] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn role(&self, id: RobotId) -> Option<Role> {
        self.0.get(id).copied()
    }

    pub fn id_of(&self, role: Role) -> Option<RobotId> {
        self.0.iter().position(|&r| r == role)
    }

    pub fn iter(&self) -> impl Iterator<Item = (RobotId, Role)> + '_ {
        self.0.iter().copied().enumerate()
    }
}

/// Builds the Freeze-Tag instance for `cnf`, with deadline `L`.
pub fn reduce(cnf: &NormalizedCnf) -> (FtpInstance, RoleTable, ReductionConstants) {
    let c = ReductionConstants::new(cnf.var_count(), cnf.clause_count())
        .expect("normalized formulas have valid shape");
    let roles = RoleTable::for_cnf(cnf);
    let robots = roles
        .iter()
        .map(|(id, role)| Robot {
            id,
            home: point_of_role(role, &c).expect("roles derived from the formula are in range"),
        })
        .collect();
    let instance = FtpInstance {
        metric: Metric::L1,
        source: 0,
        robots,
        deadline: Some(c.l.clone()),
    };
    (instance, roles, c)
}

// Role-table sidecar file format.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleRecord {
    pub id: RobotId,
    pub role: RoleJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleJson {
    pub kind: RoleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarity: Option<Polarity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoleKind {
    R,
    S,
    Group,
    OccC,
    OccD,
    Clause,
}

impl From<Role> for RoleJson {
    fn from(role: Role) -> Self {
        let (kind, var, clause, polarity) = match role {
            Role::R(i) => (RoleKind::R, Some(i), None, None),
            Role::S(i) => (RoleKind::S, Some(i), None, None),
            Role::GroupMember { var, polarity, clause } => (RoleKind::Group, Some(var), Some(clause), Some(polarity)),
            Role::OccC { var, polarity, clause } => (RoleKind::OccC, Some(var), Some(clause), Some(polarity)),
            Role::OccD { var, polarity, clause } => (RoleKind::OccD, Some(var), Some(clause), Some(polarity)),
            Role::Clause { polarity, clause } => (RoleKind::Clause, None, Some(clause), Some(polarity)),
        };
        RoleJson { kind, var, clause, polarity }
    }
}

impl TryFrom<&RoleJson> for Role {
    type Error = String;

    fn try_from(r: &RoleJson) -> Result<Self, Self::Error> {
        let need = |v: Option<usize>, what: &str| v.ok_or_else(|| format!("{:?} role needs `{what}`", r.kind));
        let pol = || r.polarity.ok_or_else(|| format!("{:?} role needs `polarity`", r.kind));
        let unexpected = |present: bool, what: &str| {
            if present {
                Err(format!("{:?} role must not carry `{what}`", r.kind))
            } else {
                Ok(())
            }
        };
        Ok(match r.kind {
            RoleKind::R | RoleKind::S => {
                unexpected(r.clause.is_some(), "clause")?;
                unexpected(r.polarity.is_some(), "polarity")?;
                let i = need(r.var, "var")?;
                if r.kind == RoleKind::R {
                    Role::R(i)
                } else {
                    Role::S(i)
                }
            }
            RoleKind::Group | RoleKind::OccC | RoleKind::OccD => {
                let (var, clause, polarity) = (need(r.var, "var")?, need(r.clause, "clause")?, pol()?);
                match r.kind {
                    RoleKind::Group => Role::GroupMember { var, polarity, clause },
                    RoleKind::OccC => Role::OccC { var, polarity, clause },
                    _ => Role::OccD { var, polarity, clause },
                }
            }
            RoleKind::Clause => {
                unexpected(r.var.is_some(), "var")?;
                Role::Clause { polarity: pol()?, clause: need(r.clause, "clause")? }
            }
        })
    }
}

impl RoleTable {
    pub fn to_records(&self) -> Vec<RoleRecord> {
        self.iter().map(|(id, role)| RoleRecord { id, role: role.into() }).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_records()).expect("roles serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let records: Vec<RoleRecord> = serde_json::from_str(text)?;
        RoleTable::from_records(&records).map_err(FormatError::Roles)
    }

    /// Records must list ids `0..N` in order.
    pub fn from_records(records: &[RoleRecord]) -> Result<Self, String> {
        records
            .iter()
            .enumerate()
            .map(|(expected, rec)| {
                if rec.id != expected {
                    return Err(format!("role record {expected} has id {}", rec.id));
                }
                Role::try_from(&rec.role)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(RoleTable)
    }
}
