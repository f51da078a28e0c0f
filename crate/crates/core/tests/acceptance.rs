//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Pass criterion numbers as arguments to run
//! a subset, e.g. `cargo test -p freeze-tag --test acceptance -- 4 6`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{all_cnfs, normalized_models, random_instance, seeded_cnf};
use freeze_tag::cnf::{self, normalize, parse_dimacs, Clause, MonotoneCnf, NormalizedCnf, Polarity};
use freeze_tag::geometry::{l1, on_l1_geodesic};
use freeze_tag::reduction::{group_point, point_of_role, reduce, Role, RoleTable};
use freeze_tag::schedule::{lower_bound, validate, FtpInstance, Schedule};
use freeze_tag::solvers::{enumerate_oracle, solve_exact, solve_greedy, SolverConfig, DEFAULT_ORACLE_CAP};
use freeze_tag::witness::build_witness;
use freeze_tag::{Metric, Point3, Rational};
use rand::seq::index::sample;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "gadget geometry", limit: Some(Duration::from_secs(10)), run: gadget_geometry },
    Criterion { id: 2, name: "forward direction", limit: Some(Duration::from_secs(60)), run: forward_direction },
    Criterion { id: 3, name: "threshold certification", limit: None, run: threshold_certification },
    Criterion { id: 4, name: "solver oracle equivalence", limit: Some(Duration::from_secs(120)), run: solver_equivalence },
    Criterion { id: 5, name: "normalization soundness", limit: Some(Duration::from_secs(30)), run: normalization_soundness },
    Criterion { id: 6, name: "validator scaling", limit: None, run: validator_scaling },
    Criterion { id: 7, name: "format roundtrips", limit: None, run: format_roundtrips },
];

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| wanted.is_empty() || wanted.contains(&c.id)) {
        let start = Instant::now();
        let mut result = (c.run)();
        let took = start.elapsed();
        if let (Ok(msg), Some(limit)) = (&result, c.limit) {
            if took > limit {
                result = Err(format!("{msg}; took {took:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(msg) => println!("PASS criterion {} ({}): {msg} [{took:.2?}]", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({}): {msg} [{took:.2?}]", c.id, c.name);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Normalized CNFs with `n <= 15` and `m <= 12`, drawn from seeded raw formulas.
fn gadget_corpus(count: usize) -> Vec<NormalizedCnf> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        let norm = normalize(&seeded_cnf(1_000 + seed, 13, 12));
        seed += 1;
        if norm.var_count() <= 15 && norm.clause_count() <= 12 {
            out.push(norm);
        }
    }
    out
}

fn check_gadgets(norm: &NormalizedCnf) -> Result<(), String> {
    let (inst, roles, c) = reduce(norm);
    let (n, m) = (c.n, c.m);
    let o = Point3::origin();
    let eps = &c.epsilon;
    let at = |role: Role| point_of_role(role, &c).map_err(|e| e.to_string());

    ensure!(inst.len() == 2 * n + 10 * m, "robot count {} for n={n}, m={m}", inst.len());
    for (id, role) in roles.iter() {
        ensure!(*inst.home(id) == at(role)?, "robot {id} ({role:?}) misplaced");
    }
    ensure!(inst.robots.iter().filter(|r| r.home == o).count() == n, "origin census");
    ensure!(roles.role(inst.source) == Some(Role::R(1)), "source is not R(1)");
    ensure!(c.alpha > eps * 4, "alpha <= 4 eps");
    ensure!(&c.epsilon * 3 + 6 > c.l, "timing gap 6+3eps > L fails");

    for i in 1..=n {
        let t = group_point(i, Polarity::Positive, &c);
        let f = group_point(i, Polarity::Negative, &c);
        let s = at(Role::S(i))?;
        ensure!(l1(&o, &t) == eps + 2 && l1(&o, &f) == eps + 2, "d(O, group {i}) != 2+eps");
        ensure!(l1(&t, &f) == eps * 2, "d(T, F) != 2eps for {i}");
        ensure!(l1(&o, &s) == &c.l - eps * 4, "d(O, S_{i}) != L-4eps");
        let gs = &c.l - 2 - eps * 3;
        ensure!(l1(&t, &s) == gs && l1(&f, &s) == gs, "d(group, S_{i}) != L-2-3eps");
        for j in i + 1..=n {
            let d = l1(&s, &at(Role::S(j))?);
            ensure!(d == &c.alpha * 2 * (j - i) as i64, "d(S_{i}, S_{j}) = {d}");
            ensure!(d >= c.alpha, "S_{i}, S_{j} closer than alpha");
        }
    }
    for (polarity, clause, cl) in norm.indexed_clauses() {
        let robot = at(Role::Clause { polarity, clause })?;
        ensure!(l1(&o, &robot) == c.l, "d(O, clause {polarity:?} {clause}) != L");
        for var in cl.vars().map(|v| v as usize) {
            let g = group_point(var, polarity, &c);
            let occ_c = at(Role::OccC { var, polarity, clause })?;
            let occ_d = at(Role::OccD { var, polarity, clause })?;
            ensure!(l1(&g, &occ_c) == 2.into(), "d(group, C) != 2 at {var} {polarity:?} {clause}");
            ensure!(l1(&occ_c, &occ_d) == Rational::from_integer(2) - eps * 2, "d(C, D) != 2-2eps");
            ensure!(on_l1_geodesic(&g, &occ_c, &occ_d), "group, C, D not geodesic");
            ensure!(l1(&occ_c, &robot) == 2.into(), "d(C, clause robot) != 2 at {var} {polarity:?} {clause}");
        }
    }
    Ok(())
}

fn gadget_geometry() -> Outcome {
    let mut corpus = gadget_corpus(99);
    corpus.push(largest_formula());
    for (i, norm) in corpus.iter().enumerate() {
        check_gadgets(norm).map_err(|e| format!("formula #{i}: {e}"))?;
    }
    let largest = corpus.iter().map(|f| (f.var_count(), f.clause_count())).max().unwrap();
    Ok(format!("100 formulas, largest (n, m) = {largest:?}, all invariants exact"))
}

/// Exhaustive formulas over at most four variables with at most four clauses,
/// followed by 200 seeded formulas over at most eight variables.
fn forward_corpus() -> Vec<MonotoneCnf> {
    let mut corpus: Vec<MonotoneCnf> = (0..=4).flat_map(|v| all_cnfs(v, 4)).collect();
    corpus.extend((0..200).map(|s| seeded_cnf(2_000 + s, 8, 6)));
    corpus
}

fn forward_direction() -> Outcome {
    let corpus = forward_corpus();
    let (mut witnesses, mut unsat) = (0usize, 0usize);
    for (i, input) in corpus.iter().enumerate() {
        let norm = normalize(input);
        let (inst, roles, c) = reduce(&norm);
        let models = normalized_models(input, &norm);
        if models.is_empty() {
            unsat += 1;
        }
        for a in models {
            let sched = build_witness(&norm, &a, &roles, &c).map_err(|e| format!("formula #{i}, {a}: {e}"))?;
            let rep = validate(&inst, &sched, Some(&c.l));
            ensure!(rep.valid, "formula #{i}, {a}: {:?}", rep.violations.first());
            ensure!(rep.makespan == c.l, "formula #{i}, {a}: makespan {} != L {}", rep.makespan, c.l);
            witnesses += 1;
        }
    }
    Ok(format!("{} formulas ({unsat} unsatisfiable), {witnesses} witnesses valid with makespan L", corpus.len()))
}

fn threshold_certification() -> Outcome {
    let corpus = forward_corpus();
    for (i, input) in corpus.iter().enumerate() {
        let (inst, _, c) = reduce(&normalize(input));
        let lb = lower_bound(&inst);
        ensure!(lb == c.l, "formula #{i}: lower bound {lb} != L {}", c.l);
        ensure!(&c.epsilon * 3 + 6 > c.l, "formula #{i}: timing gap fails");
    }
    Ok(format!("{} instances with lower_bound = L and 6+3eps > L", corpus.len()))
}

fn solver_equivalence() -> Outcome {
    let tol = Rational::new(1, 1_000_000_000);
    let mut runs = 0;
    for seed in 0..200u64 {
        for metric in [Metric::L1, Metric::Linf, Metric::L2] {
            let inst = random_instance(3_000 + seed, metric, 7);
            let tag = format!("seed {seed} {metric}");
            let exact = solve_exact(&inst, &SolverConfig::default()).map_err(|e| format!("{tag}: {e}"))?;
            let greedy = solve_greedy(&inst).map_err(|e| format!("{tag}: {e}"))?;
            let oracle = enumerate_oracle(&inst, DEFAULT_ORACLE_CAP).map_err(|e| format!("{tag}: {e}"))?;
            let lb = lower_bound(&inst);
            if metric.is_exact() {
                ensure!(exact.makespan == oracle, "{tag}: exact {} != oracle {oracle}", exact.makespan);
                ensure!(lb <= exact.makespan && exact.makespan <= greedy.makespan, "{tag}: bounds out of order");
            } else {
                ensure!((&exact.makespan - &oracle).abs() <= tol, "{tag}: exact {} vs oracle {oracle}", exact.makespan);
                ensure!(lb <= &exact.makespan + &tol, "{tag}: lower bound above exact");
                ensure!(exact.makespan <= &greedy.makespan + &tol, "{tag}: exact above greedy");
            }
            for (name, sol) in [("exact", &exact), ("greedy", &greedy)] {
                let rep = validate(&inst, &sol.schedule, None);
                ensure!(rep.valid, "{tag}: {name} schedule invalid: {:?}", rep.violations.first());
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} solves (200 instances x 3 metrics) agree with the oracle"))
}

fn normalization_soundness() -> Outcome {
    // Odd seeds draw dense formulas so that a good share is unsatisfiable.
    let mut unsat = 0;
    for seed in 0..200u64 {
        let input = seeded_cnf(5_000 + seed, 10, if seed % 2 == 0 { 12 } else { 120 });
        let norm = normalize(&input);
        let before = cnf::brute_force_sat(&input).map_err(|e| e.to_string())?.is_some();
        let after = cnf::brute_force_sat(norm.cnf()).map_err(|e| e.to_string())?.is_some();
        ensure!(before == after, "seed {seed}: satisfiability {before} became {after}");
        ensure!(normalize(norm.cnf()) == norm, "seed {seed}: normalize is not idempotent");
        unsat += usize::from(!before);
    }
    Ok(format!("200 formulas ({unsat} unsatisfiable): satisfiability preserved, normalize idempotent"))
}

/// A satisfiable formula with exactly 15 variables and 6 clauses per polarity.
fn largest_formula() -> NormalizedCnf {
    for seed in 6_000.. {
        let mut r = common::rng(seed);
        let clauses: Vec<Clause> = [Polarity::Positive, Polarity::Negative]
            .into_iter()
            .flat_map(|pol| std::iter::repeat_n(pol, 6))
            .map(|pol| {
                let idx = sample(&mut r, 15, 3);
                let vars = [idx.index(0) as u32 + 1, idx.index(1) as u32 + 1, idx.index(2) as u32 + 1];
                Clause::new(pol, vars).unwrap()
            })
            .collect();
        let input = MonotoneCnf::new(15, clauses).unwrap();
        if cnf::brute_force_sat(&input).unwrap().is_some() {
            return normalize(&input);
        }
    }
    unreachable!()
}

fn validator_scaling() -> Outcome {
    let norm = largest_formula();
    ensure!(norm.var_count() == 15 && norm.clause_count() == 12, "normalization reshaped the formula");
    let (inst, roles, c) = reduce(&norm);
    let a = cnf::brute_force_sat(norm.cnf()).unwrap().unwrap();
    let sched = build_witness(&norm, &a, &roles, &c).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let rep = validate(&inst, &sched, Some(&c.l));
    let took = start.elapsed();
    ensure!(rep.valid && rep.makespan == c.l, "witness rejected: {:?}", rep.violations.first());
    ensure!(took < Duration::from_secs(1), "validation took {took:?}");
    let waypoints: usize = sched.itineraries.iter().map(|it| it.waypoints.len()).sum();
    Ok(format!("{} robots, {waypoints} waypoints validated in {took:.2?}", inst.len()))
}

fn roundtrip_text<T: PartialEq + std::fmt::Debug>(
    what: &str,
    value: &T,
    to: impl Fn(&T) -> String,
    from: impl Fn(&str) -> Result<T, String>,
) -> Result<(), String> {
    let text = to(value);
    let back = from(&text).map_err(|e| format!("{what}: {e}"))?;
    ensure!(back == *value, "{what}: parsed value differs");
    ensure!(to(&back) == text, "{what}: text not bit-exact after reparse");
    Ok(())
}

fn format_roundtrips() -> Outcome {
    let mut files = 0;
    let mut formulas = vec![parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap()];
    formulas.extend((0..30).map(|s| seeded_cnf(7_000 + s, 8, 6)));
    for input in &formulas {
        let norm = normalize(input);
        let (inst, roles, c) = reduce(&norm);
        roundtrip_text("cnf", input, MonotoneCnf::to_dimacs, |t| parse_dimacs(t).map_err(|e| e.to_string()))?;
        roundtrip_text("normalized cnf", norm.cnf(), MonotoneCnf::to_dimacs, |t| {
            parse_dimacs(t).map_err(|e| e.to_string())
        })?;
        roundtrip_text("instance", &inst, FtpInstance::to_json, |t| FtpInstance::from_json(t).map_err(|e| e.to_string()))?;
        roundtrip_text("roles", &roles, RoleTable::to_json, |t| RoleTable::from_json(t).map_err(|e| e.to_string()))?;
        files += 4;
        if let Some(a) = normalized_models(input, &norm).first() {
            let sched = build_witness(&norm, a, &roles, &c).map_err(|e| e.to_string())?;
            roundtrip_text("schedule", &sched, Schedule::to_json, |t| Schedule::from_json(t).map_err(|e| e.to_string()))?;
            files += 1;
        }
    }
    for seed in 0..30u64 {
        let inst = random_instance(8_000 + seed, Metric::L2, 6);
        let sched = solve_greedy(&inst).map_err(|e| e.to_string())?.schedule;
        roundtrip_text("L2 instance", &inst, FtpInstance::to_json, |t| FtpInstance::from_json(t).map_err(|e| e.to_string()))?;
        roundtrip_text("L2 schedule", &sched, Schedule::to_json, |t| Schedule::from_json(t).map_err(|e| e.to_string()))?;
        files += 2;
    }
    let sample = Rational::new(-6, 4).to_string();
    ensure!(sample == "-3/2", "rational text form {sample}");
    Ok(format!("{files} files reparsed bit-exactly"))
}
