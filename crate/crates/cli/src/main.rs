//! `freeze-tag`: command-line driver for the reduction pipeline and solvers.
//!
//! Exit status: 0 on success, 1 when a checked property fails (invalid
//! schedule, unsatisfiable formula, refuted round trip), 2 on usage or input
//! errors. Verdicts go to standard output as single-line JSON; diagnostics go
//! to standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use freeze_tag::cnf::{self, Assignment, MonotoneCnf, NormalizedCnf};
use freeze_tag::reduction::reduce;
use freeze_tag::schedule::{lower_bound, validate, FtpInstance, Schedule};
use freeze_tag::solvers::{solve_exact, solve_greedy, Solution, SolverConfig, SolverError, DEFAULT_LOCATION_CAP};
use freeze_tag::witness::build_witness;
use freeze_tag::Rational;

#[derive(Parser)]
#[command(name = "freeze-tag", version, about = "Monotone 3SAT to 3D L1 Freeze-Tag reduction toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a random monotone 3-CNF in DIMACS form.
    GenCnf {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite a CNF into the normal form the reduction expects.
    Normalize {
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the Freeze-Tag instance and role table for a CNF.
    Reduce {
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        roles: Option<PathBuf>,
    },
    /// Build the awakening schedule certifying a satisfying assignment.
    Witness {
        cnf: PathBuf,
        #[command(flatten)]
        source: AssignmentSource,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate a schedule against an instance and print the report.
    Verify {
        instance: PathBuf,
        schedule: PathBuf,
        /// Overrides the deadline stored in the instance.
        #[arg(long)]
        deadline: Option<Rational>,
    },
    /// Solve an instance exactly or greedily.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        method: Method,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Seconds before the exact search returns its incumbent.
        #[arg(long)]
        time_budget: Option<f64>,
        /// Most distinct frozen locations the exact solver accepts.
        #[arg(long, default_value_t = DEFAULT_LOCATION_CAP)]
        cap: usize,
        /// Report search statistics on standard error as JSON.
        #[arg(long)]
        stats_json: bool,
    },
    /// Print the distance lower bound and the greedy upper bound.
    Bounds { instance: PathBuf },
    /// Check the forward direction of the reduction on a small CNF.
    Roundtrip { cnf: PathBuf },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AssignmentSource {
    /// Values as T/F (or 1/0) for x1, x2, ...; may omit variables added by normalization.
    #[arg(long)]
    assignment: Option<Assignment>,
    /// Find a satisfying assignment by brute force.
    #[arg(long)]
    auto: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Method {
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    greedy: bool,
}

/// A checked property failed; the message goes to standard error.
struct Refuted(String);

type Outcome = Result<(), Refuted>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Refuted(msg))) => {
            if !msg.is_empty() {
                eprintln!("freeze-tag: {msg}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("freeze-tag: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::GenCnf { vars, clauses, seed, output } => {
            if clauses > 0 && vars < 3 {
                bail!("--vars must be at least 3 when --clauses is positive");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cnf = cnf::random_cnf(&mut rng, vars, clauses);
            emit(output.as_deref(), &cnf.to_dimacs())?;
        }
        Command::Normalize { cnf, output } => {
            let norm = cnf::normalize(&read_cnf(&cnf)?);
            emit(output.as_deref(), &norm.cnf().to_dimacs())?;
        }
        Command::Reduce { cnf, output, roles } => {
            let norm = cnf::normalize(&read_cnf(&cnf)?);
            let (instance, table, _) = reduce(&norm);
            emit(output.as_deref(), &instance.to_json())?;
            if let Some(path) = roles {
                write_file(&path, &table.to_json())?;
            }
        }
        Command::Witness { cnf, source, output } => {
            let input = read_cnf(&cnf)?;
            let norm = cnf::normalize(&input);
            let assignment = match source.assignment {
                Some(given) => match complete(&input, &norm, &given)? {
                    Some(a) => a,
                    None => return Ok(Err(Refuted(format!("assignment {given} does not satisfy the formula")))),
                },
                None => match cnf::brute_force_sat(&input)? {
                    Some(a) => cnf::complete_assignment(norm.cnf(), &a)?.expect("normalization preserves models"),
                    None => return Ok(Err(Refuted("formula is unsatisfiable".into()))),
                },
            };
            let (_, table, consts) = reduce(&norm);
            let sched = build_witness(&norm, &assignment, &table, &consts)?;
            emit(output.as_deref(), &sched.to_json())?;
        }
        Command::Verify { instance, schedule, deadline } => {
            let inst = read_instance(&instance)?;
            let sched = Schedule::from_json(&read(&schedule)?)
                .with_context(|| format!("reading {}", schedule.display()))?;
            let deadline = deadline.or_else(|| inst.deadline.clone());
            let report = validate(&inst, &sched, deadline.as_ref());
            println!("{}", report.to_json_line());
            if !report.valid {
                return Ok(Err(Refuted(String::new())));
            }
        }
        Command::Solve { instance, method, output, time_budget, cap, stats_json } => {
            let inst = read_instance(&instance)?;
            let solution = if method.greedy {
                solve_greedy(&inst)?
            } else {
                let time_budget = time_budget
                    .map(Duration::try_from_secs_f64)
                    .transpose()
                    .context("--time-budget must be a nonnegative number of seconds")?;
                let cfg = SolverConfig { location_cap: cap, time_budget, ..SolverConfig::default() };
                match solve_exact(&inst, &cfg) {
                    Ok(s) => s,
                    Err(SolverError::TimeBudgetExceeded(best)) => {
                        eprintln!("freeze-tag: time budget exceeded; emitting best schedule found");
                        *best
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            report_stats(&solution, stats_json);
            emit(output.as_deref(), &solution.schedule.to_json())?;
        }
        Command::Bounds { instance } => {
            let inst = read_instance(&instance)?;
            let greedy = solve_greedy(&inst)?;
            let line = json!({
                "robots": inst.len(),
                "metric": inst.metric.name(),
                "lower_bound": lower_bound(&inst).to_string(),
                "greedy_upper_bound": greedy.makespan.to_string(),
            });
            println!("{line}");
        }
        Command::Roundtrip { cnf } => return roundtrip(&read_cnf(&cnf)?),
    }
    Ok(Ok(()))
}

/// Brute-forces the input formula; when satisfiable, the witness must
/// validate with makespan exactly `L`. `lower_bound = L` is checked either way.
fn roundtrip(input: &MonotoneCnf) -> Result<Outcome> {
    let norm = cnf::normalize(input);
    let (instance, table, consts) = reduce(&norm);
    let lb = lower_bound(&instance);
    let mut failures: Vec<String> = Vec::new();
    if lb != consts.l {
        failures.push(format!("lower bound {lb} differs from L = {}", consts.l));
    }
    let model = cnf::brute_force_sat(input)?;
    let mut witness = serde_json::Value::Null;
    if let Some(a) = &model {
        let full = cnf::complete_assignment(norm.cnf(), a)?.expect("normalization preserves models");
        let sched = build_witness(&norm, &full, &table, &consts)?;
        let report = validate(&instance, &sched, Some(&consts.l));
        if !report.valid {
            failures.push(format!("witness rejected: {} violations", report.violations.len()));
        } else if report.makespan != consts.l {
            failures.push(format!("witness makespan {} differs from L", report.makespan));
        }
        witness = json!({
            "assignment": full.to_string(),
            "valid": report.valid,
            "makespan": report.makespan.to_string(),
        });
    }
    let line = json!({
        "verdict": if failures.is_empty() { "confirmed" } else { "refuted" },
        "vars": norm.var_count(),
        "clauses": norm.clause_count(),
        "robots": instance.len(),
        "satisfiable": model.is_some(),
        "L": consts.l.to_string(),
        "lower_bound": lb.to_string(),
        "witness": witness,
        "failures": failures,
    });
    println!("{line}");
    Ok(if failures.is_empty() { Ok(()) } else { Err(Refuted(String::new())) })
}

/// Accepts an assignment for either the input or the normalized formula.
fn complete(input: &MonotoneCnf, norm: &NormalizedCnf, given: &Assignment) -> Result<Option<Assignment>> {
    let n = norm.var_count();
    if given.len() != input.var_count() && given.len() != n {
        bail!("assignment has {} values; expected {} or {n}", given.len(), input.var_count());
    }
    if given.len() == input.var_count() && !input.evaluate(given)? {
        return Ok(None);
    }
    Ok(cnf::complete_assignment(norm.cnf(), given)?)
}

fn report_stats(solution: &Solution, as_json: bool) {
    let s = &solution.stats;
    if as_json {
        let line = json!({
            "makespan": solution.makespan.to_string(),
            "optimal": solution.optimal,
            "stats": s,
        });
        eprintln!("{line}");
    } else {
        eprintln!(
            "makespan {} ({}), {} locations, {} nodes, {} leaves, {} bound prunes, {} symmetry prunes, {} ms",
            solution.makespan,
            if solution.optimal { "optimal" } else { "not proven optimal" },
            s.locations,
            s.nodes,
            s.leaves,
            s.bound_prunes,
            s.symmetry_prunes,
            s.elapsed_ms
        );
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_cnf(path: &Path) -> Result<MonotoneCnf> {
    cnf::parse_dimacs(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_instance(path: &Path) -> Result<FtpInstance> {
    FtpInstance::from_json(&read(path)?).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            std::io::stdout().write_all(text.as_bytes()).context("writing standard output")?;
            Ok(())
        }
    }
}
