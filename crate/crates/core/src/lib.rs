//! # freeze-tag
//!
//! Monotone-3SAT to Freeze-Tag in three dimensions under the L1 metric.
//!
//! The crate compiles a monotone 3-CNF formula into a set of robot positions
//! whose optimal wake-up makespan is exactly `L = 6 + eps` when the formula is
//! satisfiable, and provides the tools to check that claim mechanically:
//!
//! * [`cnf`]: parsing, brute-force satisfiability and the normal form the
//!   construction expects;
//! * [`reduction`]: gadget constants and robot placement;
//! * [`witness`]: the makespan-`L` schedule built from a satisfying assignment;
//! * [`schedule`]: instance and schedule formats, and an exact polynomial-time
//!   validator;
//! * [`solvers`]: exact, greedy and brute-force Freeze-Tag solvers for small
//!   instances.
//!
//! All coordinates and times are exact [`Rational`]s.
//!
//! ```
//! use freeze_tag::cnf::{normalize, parse_dimacs, brute_force_sat};
//! use freeze_tag::reduction::reduce;
//! use freeze_tag::schedule::{lower_bound, validate};
//! use freeze_tag::witness::build_witness;
//!
//! let cnf = normalize(&parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap());
//! let (instance, roles, consts) = reduce(&cnf);
//! let assignment = brute_force_sat(cnf.cnf()).unwrap().unwrap();
//! let schedule = build_witness(&cnf, &assignment, &roles, &consts).unwrap();
//!
//! let report = validate(&instance, &schedule, Some(&consts.l));
//! assert!(report.valid);
//! assert_eq!(report.makespan, consts.l);
//! assert_eq!(lower_bound(&instance), consts.l);
//! ```

pub mod cnf;
pub mod geometry;
mod rational;
pub mod reduction;
pub mod schedule;
pub mod solvers;
pub mod witness;

pub use geometry::{distance, on_l1_geodesic, Metric, Point3};
pub use rational::{ParseRationalError, Rational};
