mod common;

use common::{normalized_models, seeded_cnf};
use freeze_tag::cnf::{normalize, parse_dimacs};
use freeze_tag::reduction::{reduce, Role};
use freeze_tag::schedule::{lower_bound, makespan, validate, ViolationKind};
use freeze_tag::witness::{build_witness, WitnessTimeline};
use freeze_tag::Rational;
use proptest::prelude::*;

#[test]
fn smallest_example_end_to_end() {
    let norm = normalize(&parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap());
    let (inst, roles, c) = reduce(&norm);
    assert_eq!(inst.len(), 46);
    assert_eq!(inst.deadline, Some(Rational::new(49, 8)));
    let sched = build_witness(&norm, &"TFF".parse().unwrap(), &roles, &c).unwrap();
    let rep = validate(&inst, &sched, Some(&c.l));
    assert!(rep.valid, "{:?}", rep.violations);
    assert_eq!(rep.makespan, Rational::new(49, 8));
    assert_eq!(makespan(&sched).unwrap(), lower_bound(&inst));
}

#[test]
fn witness_times_follow_the_timeline() {
    let input = parse_dimacs("p cnf 5 4\n1 2 4 0\n3 4 5 0\n-1 -2 -3 0\n-2 -4 -5 0\n").unwrap();
    let norm = normalize(&input);
    let (_, roles, c) = reduce(&norm);
    let tl = WitnessTimeline::new(&c);
    for a in normalized_models(&input, &norm) {
        let sched = build_witness(&norm, &a, &roles, &c).unwrap();
        for (id, role) in roles.iter() {
            let t = sched.activation(id).unwrap();
            match role {
                Role::R(_) => assert_eq!(*t, tl.r_wake),
                Role::S(_) | Role::Clause { .. } => assert_eq!(*t, c.l),
                Role::GroupMember { .. } => assert!(*t == tl.first_group || *t == tl.second_group),
                Role::OccC { .. } => assert!(*t == tl.first_batch_c || *t == tl.second_batch_c),
                Role::OccD { .. } => assert!(*t == tl.first_batch_d || *t == tl.second_batch_d),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_model_yields_a_tight_witness(seed in any::<u64>()) {
        let input = seeded_cnf(seed, 7, 6);
        let norm = normalize(&input);
        let (inst, roles, c) = reduce(&norm);
        prop_assert_eq!(lower_bound(&inst), c.l.clone());
        for a in normalized_models(&input, &norm).into_iter().take(8) {
            let sched = build_witness(&norm, &a, &roles, &c).unwrap();
            let rep = validate(&inst, &sched, Some(&c.l));
            prop_assert!(rep.valid, "{:?}", rep.violations);
            prop_assert_eq!(&rep.makespan, &c.l);
        }
    }

    /// Clause robots are woken exactly at the deadline, so delaying one breaks it.
    #[test]
    fn witness_has_no_slack_at_clause_robots(seed in any::<u64>()) {
        let input = seeded_cnf(seed, 6, 5);
        let norm = normalize(&input);
        let (inst, roles, c) = reduce(&norm);
        let Some(a) = normalized_models(&input, &norm).into_iter().next() else { return Ok(()) };
        let mut sched = build_witness(&norm, &a, &roles, &c).unwrap();
        let (id, _) = roles.iter().find(|(_, r)| matches!(r, Role::Clause { .. })).unwrap();
        let first = &mut sched.itineraries[id].waypoints[0];
        first.time = &first.time + &c.epsilon;
        let rep = validate(&inst, &sched, Some(&c.l));
        prop_assert!(!rep.valid);
        prop_assert!(rep.has(ViolationKind::DeadlineExceeded) || rep.has(ViolationKind::UnjustifiedActivation));
    }
}
