//! Monotone 3-CNF formulas: model, DIMACS parsing, brute-force satisfiability
//! and the normal form the reduction consumes.

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default variable cap for [`brute_force_sat`].
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: clause mixes positive and negative literals")]
    NonMonotoneClause { line: usize },
    #[error("line {line}: clause has {found} literals, expected 3")]
    BadArity { line: usize, found: usize },
    #[error("line {line}: variable {var} repeated within a clause")]
    RepeatedVariable { line: usize, var: u32 },
    #[error("line {line}: variable {var} outside 1..={var_count}")]
    IndexOutOfRange { line: usize, var: u32, var_count: usize },
    #[error("line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("assignment has {found} values but formula has {expected} variables")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{var_count} variables exceeds brute-force cap of {cap}")]
    TooLarge { var_count: usize, cap: usize },
    #[error("formula is not in normal form: {0}")]
    NotNormalized(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "pos")]
    Positive,
    #[serde(rename = "neg")]
    Negative,
}

impl Polarity {
    pub fn opposite(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    /// The truth value of a variable that makes a literal of this polarity true.
    pub fn satisfied_by(self) -> bool {
        self == Polarity::Positive
    }
}

/// Three distinct variables (1-based, stored ascending) sharing one polarity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    polarity: Polarity,
    vars: [u32; 3],
}

impl Clause {
    /// Returns `None` unless the three indices are distinct and nonzero.
    pub fn new(polarity: Polarity, mut vars: [u32; 3]) -> Option<Self> {
        vars.sort_unstable();
        (vars[0] > 0 && vars[0] < vars[1] && vars[1] < vars[2]).then_some(Clause { polarity, vars })
    }

    pub fn positive(vars: [u32; 3]) -> Self {
        Clause::new(Polarity::Positive, vars).expect("three distinct nonzero variables")
    }

    pub fn negative(vars: [u32; 3]) -> Self {
        Clause::new(Polarity::Negative, vars).expect("three distinct nonzero variables")
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn vars(&self) -> [u32; 3] {
        self.vars
    }

    pub fn contains(&self, var: u32) -> bool {
        self.vars.contains(&var)
    }

    pub fn is_satisfied(&self, assignment: &Assignment) -> bool {
        let want = self.polarity.satisfied_by();
        self.vars.iter().any(|&v| assignment.value(v) == want)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.polarity {
            Polarity::Positive => "",
            Polarity::Negative => "-",
        };
        let [a, b, c] = self.vars;
        write!(f, "{sign}{a} {sign}{b} {sign}{c} 0")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneCnf {
    var_count: usize,
    clauses: Vec<Clause>,
}

impl MonotoneCnf {
    pub fn new(var_count: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for (i, c) in clauses.iter().enumerate() {
            if let Some(&var) = c.vars.iter().find(|&&v| v as usize > var_count) {
                return Err(CnfError::IndexOutOfRange { line: i + 1, var, var_count });
            }
        }
        Ok(MonotoneCnf { var_count, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn count(&self, polarity: Polarity) -> usize {
        self.clauses.iter().filter(|c| c.polarity == polarity).count()
    }

    /// Emits the DIMACS subset accepted by [`parse_dimacs`].
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<bool, CnfError> {
        if assignment.len() != self.var_count {
            return Err(CnfError::LengthMismatch {
                expected: self.var_count,
                found: assignment.len(),
            });
        }
        Ok(self.clauses.iter().all(|c| c.is_satisfied(assignment)))
    }
}

pub fn evaluate(cnf: &MonotoneCnf, assignment: &Assignment) -> Result<bool, CnfError> {
    cnf.evaluate(assignment)
}

/// Parses the DIMACS subset: `c` comment lines, one `p cnf <n> <m>` header,
/// then `m` lines of exactly three same-signed nonzero literals ending in `0`.
pub fn parse_dimacs(text: &str) -> Result<MonotoneCnf, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let syntax = |line: usize, msg: &str| CnfError::SyntaxError { line, msg: msg.to_string() };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(syntax(line, "duplicate header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match fields.as_slice() {
                ["p", "cnf", n, m] => {
                    let n = n.parse().map_err(|_| syntax(line, "bad variable count"))?;
                    let m = m.parse().map_err(|_| syntax(line, "bad clause count"))?;
                    header = Some((n, m));
                }
                _ => return Err(syntax(line, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let Some((var_count, _)) = header else {
            return Err(syntax(line, "clause before header"));
        };
        let mut lits = Vec::with_capacity(3);
        let mut terminated = false;
        for tok in trimmed.split_whitespace() {
            if terminated {
                return Err(syntax(line, "tokens after terminating 0"));
            }
            let lit: i64 = tok.parse().map_err(|_| syntax(line, &format!("bad literal `{tok}`")))?;
            if lit == 0 {
                terminated = true;
            } else {
                lits.push(lit);
            }
        }
        if !terminated {
            return Err(syntax(line, "clause not terminated by 0"));
        }
        if lits.len() != 3 {
            return Err(CnfError::BadArity { line, found: lits.len() });
        }
        let positive = lits[0] > 0;
        if lits.iter().any(|&l| (l > 0) != positive) {
            return Err(CnfError::NonMonotoneClause { line });
        }
        let mut vars = [0u32; 3];
        for (slot, &l) in vars.iter_mut().zip(&lits) {
            let v = l.unsigned_abs();
            if v > var_count as u64 {
                return Err(CnfError::IndexOutOfRange { line, var: v.min(u32::MAX as u64) as u32, var_count });
            }
            *slot = v as u32;
        }
        let polarity = if positive { Polarity::Positive } else { Polarity::Negative };
        let clause = Clause::new(polarity, vars).ok_or_else(|| {
            let mut sorted = vars;
            sorted.sort_unstable();
            let var = if sorted[0] == sorted[1] { sorted[0] } else { sorted[1] };
            CnfError::RepeatedVariable { line, var }
        })?;
        clauses.push(clause);
    }

    let Some((var_count, clause_count)) = header else {
        return Err(syntax(text.lines().count().max(1), "missing `p cnf` header"));
    };
    if clauses.len() != clause_count {
        return Err(syntax(
            text.lines().count().max(1),
            &format!("header declares {clause_count} clauses, found {}", clauses.len()),
        ));
    }
    MonotoneCnf::new(var_count, clauses)
}

/// Truth values for variables `1..=n`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all_false(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    /// Decodes `index` with variable 1 as the most significant bit, so that
    /// increasing indices are lexicographically increasing assignments.
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment((0..n).map(|i| index >> (n - 1 - i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of 1-based variable `var`.
    pub fn value(&self, var: u32) -> bool {
        self.0[var as usize - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "T" } else { "F" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Assignment {
    type Err = String;

    /// Accepts strings over `T/F` or `1/0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|ch| match ch {
                'T' | 't' | '1' => Ok(true),
                'F' | 'f' | '0' => Ok(false),
                other => Err(format!("bad assignment character `{other}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment)
    }
}

/// Every satisfying assignment, in lexicographic order (false < true,
/// variable 1 most significant).
pub fn all_satisfying(cnf: &MonotoneCnf, cap: usize) -> Result<Vec<Assignment>, CnfError> {
    let n = cnf.var_count();
    if n > cap || n >= 64 {
        return Err(CnfError::TooLarge { var_count: n, cap });
    }
    Ok((0..1u64 << n)
        .map(|i| Assignment::from_index(n, i))
        .filter(|a| cnf.clauses.iter().all(|c| c.is_satisfied(a)))
        .collect())
}

/// Lexicographically smallest satisfying assignment, by exhaustive search.
pub fn brute_force_sat_with_cap(cnf: &MonotoneCnf, cap: usize) -> Result<Option<Assignment>, CnfError> {
    let n = cnf.var_count();
    if n > cap || n >= 64 {
        return Err(CnfError::TooLarge { var_count: n, cap });
    }
    Ok((0..1u64 << n)
        .map(|i| Assignment::from_index(n, i))
        .find(|a| cnf.clauses.iter().all(|c| c.is_satisfied(a))))
}

pub fn brute_force_sat(cnf: &MonotoneCnf) -> Result<Option<Assignment>, CnfError> {
    brute_force_sat_with_cap(cnf, DEFAULT_BRUTE_FORCE_CAP)
}

/// Extends `prefix` (values for variables `1..=prefix.len()`) to a full
/// satisfying assignment of `cnf`, choosing the lexicographically smallest
/// values for the remaining variables. Used to carry an assignment of an
/// input formula over to its normalized form, whose extra variables only
/// occur in added clauses.
pub fn complete_assignment(cnf: &MonotoneCnf, prefix: &Assignment) -> Result<Option<Assignment>, CnfError> {
    let n = cnf.var_count();
    if prefix.len() > n {
        return Err(CnfError::LengthMismatch { expected: n, found: prefix.len() });
    }
    let extra = n - prefix.len();
    if extra > DEFAULT_BRUTE_FORCE_CAP {
        return Err(CnfError::TooLarge { var_count: extra, cap: DEFAULT_BRUTE_FORCE_CAP });
    }
    Ok((0..1u64 << extra)
        .map(|i| {
            let mut values = prefix.values().to_vec();
            values.extend(Assignment::from_index(extra, i).0);
            Assignment(values)
        })
        .find(|a| cnf.clauses.iter().all(|c| c.is_satisfied(a))))
}

/// A monotone CNF with an odd number of variables, `m/2 >= 2` clauses of
/// each polarity, positive clauses listed first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedCnf {
    cnf: MonotoneCnf,
    half: usize,
}

impl NormalizedCnf {
    /// Checks the normal-form invariants without rewriting anything.
    pub fn try_new(cnf: MonotoneCnf) -> Result<Self, CnfError> {
        let n = cnf.var_count;
        if n.is_multiple_of(2) || n < 3 {
            return Err(CnfError::NotNormalized(format!("variable count {n} must be odd and at least 3")));
        }
        let p = cnf.count(Polarity::Positive);
        let q = cnf.count(Polarity::Negative);
        if p != q || p < 2 {
            return Err(CnfError::NotNormalized(format!(
                "need equal polarity counts of at least 2, found {p} positive and {q} negative"
            )));
        }
        if cnf.clauses[..p].iter().any(|c| c.polarity != Polarity::Positive) {
            return Err(CnfError::NotNormalized("positive clauses must come first".into()));
        }
        Ok(NormalizedCnf { cnf, half: p })
    }

    pub fn cnf(&self) -> &MonotoneCnf {
        &self.cnf
    }

    pub fn into_inner(self) -> MonotoneCnf {
        self.cnf
    }

    pub fn var_count(&self) -> usize {
        self.cnf.var_count
    }

    /// Total clause count `m`.
    pub fn clause_count(&self) -> usize {
        self.cnf.clauses.len()
    }

    /// Clauses per polarity, `m/2`.
    pub fn half(&self) -> usize {
        self.half
    }

    /// The `k`-th (1-based) clause of the given polarity.
    pub fn clause(&self, polarity: Polarity, k: usize) -> Option<&Clause> {
        if k == 0 || k > self.half {
            return None;
        }
        let offset = match polarity {
            Polarity::Positive => 0,
            Polarity::Negative => self.half,
        };
        self.cnf.clauses.get(offset + k - 1)
    }

    /// Iterates `(polarity, k, clause)` in normalized order.
    pub fn indexed_clauses(&self) -> impl Iterator<Item = (Polarity, usize, &Clause)> {
        let half = self.half;
        self.cnf.clauses.iter().enumerate().map(move |(i, c)| {
            if i < half {
                (Polarity::Positive, i + 1, c)
            } else {
                (Polarity::Negative, i - half + 1, c)
            }
        })
    }
}

/// Rewrites `cnf` into normal form, preserving satisfiability.
///
/// Steps, in order:
/// 1. a missing polarity gets one clause over three fresh variables;
/// 2. while the variable count is even, add three fresh variables and a
///    positive clause over them;
/// 3. duplicate the first clause of the minority polarity until counts match;
/// 4. if fewer than four clauses remain, duplicate the first clause of each
///    polarity once.
///
/// The result lists positive clauses first, each polarity in original order.
pub fn normalize(cnf: &MonotoneCnf) -> NormalizedCnf {
    let mut n = cnf.var_count;
    let mut clauses = cnf.clauses.clone();

    let fresh_clause = |n: &mut usize, polarity| {
        let base = *n as u32;
        *n += 3;
        Clause::new(polarity, [base + 1, base + 2, base + 3]).expect("fresh variables are distinct")
    };

    for polarity in [Polarity::Positive, Polarity::Negative] {
        if !clauses.iter().any(|c| c.polarity == polarity) {
            let c = fresh_clause(&mut n, polarity);
            clauses.push(c);
        }
    }
    while n.is_multiple_of(2) {
        let c = fresh_clause(&mut n, Polarity::Positive);
        clauses.push(c);
    }

    let first_of = |clauses: &[Clause], polarity| {
        clauses.iter().find(|c| c.polarity == polarity).cloned().expect("both polarities present")
    };
    let count = |clauses: &[Clause], polarity| clauses.iter().filter(|c| c.polarity == polarity).count();
    let (p, q) = (count(&clauses, Polarity::Positive), count(&clauses, Polarity::Negative));
    if p != q {
        let minority = if p < q { Polarity::Positive } else { Polarity::Negative };
        let dup = first_of(&clauses, minority);
        clauses.extend(std::iter::repeat_n(dup, p.abs_diff(q)));
    }
    if clauses.len() < 4 {
        let pos = first_of(&clauses, Polarity::Positive);
        let neg = first_of(&clauses, Polarity::Negative);
        clauses.push(pos);
        clauses.push(neg);
    }

    let (mut ordered, negatives): (Vec<_>, Vec<_>) =
        clauses.into_iter().partition(|c| c.polarity == Polarity::Positive);
    ordered.extend(negatives);
    let cnf = MonotoneCnf { var_count: n, clauses: ordered };
    NormalizedCnf::try_new(cnf).expect("normalization establishes the invariants")
}

/// Random monotone CNF: each clause picks a polarity and three distinct
/// variables uniformly. Requires `vars >= 3` when `clauses > 0`.
pub fn random_cnf<R: Rng + ?Sized>(rng: &mut R, vars: usize, clauses: usize) -> MonotoneCnf {
    assert!(clauses == 0 || vars >= 3, "need at least 3 variables to build a clause");
    let clauses = (0..clauses)
        .map(|_| {
            let idx = sample(rng, vars, 3);
            let vs = [idx.index(0) as u32 + 1, idx.index(1) as u32 + 1, idx.index(2) as u32 + 1];
            let polarity = if rng.gen_bool(0.5) { Polarity::Positive } else { Polarity::Negative };
            Clause::new(polarity, vs).expect("sampled indices are distinct")
        })
        .collect();
    MonotoneCnf { var_count: vars, clauses }
}
