//! Decision procedure over boolean variables and integer difference constraints,
//! with cardinality operators and objective minimization.
//!
//! A [`Context`] collects variables and constraints; [`Context::check_minimize`]
//! runs a CDCL search whose theory is difference logic (`x - y <= k`), which is
//! enough for every timing, charge and precedence relation used by the solver
//! stages. Cardinality constraints are compiled to clauses with a totalizer.
//! Objectives are either pseudo-boolean (`sum w_i * b_i`) or a single integer
//! variable; they are minimized by repeatedly tightening a guarded bound.

mod diff;
mod engine;
mod smtlib;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Not};
use std::time::{Duration, Instant};

use thiserror::Error;

use engine::{Engine, EngineAtom, ObjectiveBound, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolVar(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVar(u32);

/// A boolean variable or its negation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn positive(v: BoolVar) -> Lit {
        Lit(v.0 << 1)
    }

    pub fn var(self) -> BoolVar {
        BoolVar(self.0 >> 1)
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    fn var_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl From<BoolVar> for Lit {
    fn from(v: BoolVar) -> Lit {
        Lit::positive(v)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            write!(f, "!b{}", self.0 >> 1)
        } else {
            write!(f, "b{}", self.0 >> 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRef {
    Bool(BoolVar),
    Int(IntVar),
}

/// `x - y <= k`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiffAtom {
    pub x: IntVar,
    pub y: IntVar,
    pub k: i64,
}

/// An assertable constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// At least one literal is true.
    Clause(Vec<Lit>),
    /// Exactly `n` literals are true.
    Exactly { lits: Vec<Lit>, n: usize },
}

impl Constraint {
    /// Evaluates the constraint under `model` without going through the solver.
    pub fn holds(&self, model: &Model) -> bool {
        match self {
            Constraint::Clause(lits) => lits.iter().any(|&l| model.lit(l)),
            Constraint::Exactly { lits, n } => {
                lits.iter().filter(|&&l| model.lit(l)).count() == *n
            }
        }
    }
}

/// `constant + sum(coef * lit) + sum(coef * int)`
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub constant: i64,
    pub bools: Vec<(Lit, i64)>,
    pub ints: Vec<(IntVar, i64)>,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        LinExpr {
            constant: c,
            ..Default::default()
        }
    }

    pub fn int(x: IntVar) -> Self {
        LinExpr {
            ints: vec![(x, 1)],
            ..Default::default()
        }
    }

    pub fn lit(l: Lit) -> Self {
        LinExpr {
            bools: vec![(l, 1)],
            ..Default::default()
        }
    }

    pub fn is_constant(&self) -> bool {
        self.bools.is_empty() && self.ints.is_empty()
    }

    /// `Some((x, c))` when the expression is exactly `x + c`.
    fn as_offset_var(&self) -> Option<(IntVar, i64)> {
        match (self.bools.as_slice(), self.ints.as_slice()) {
            ([], [(x, 1)]) => Some((*x, self.constant)),
            _ => None,
        }
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self.constant += rhs.constant;
        self.bools.extend(rhs.bools);
        self.ints.extend(rhs.ints);
        self
    }
}

impl std::iter::Sum for LinExpr {
    fn sum<I: Iterator<Item = LinExpr>>(iter: I) -> LinExpr {
        iter.fold(LinExpr::default(), |a, b| a + b)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BackendError {
    #[error("cardinality constraint over an empty set")]
    EmptyCardinality,
    #[error("cardinality {n} out of range for {len} literals")]
    CardinalityOutOfRange { n: usize, len: usize },
    #[error("term is not expressible as a difference constraint: {0}")]
    NonDifference(String),
    #[error("unsupported objective: {0}")]
    UnsupportedObjective(String),
}

/// A satisfying assignment.
#[derive(Debug, Clone)]
pub struct Model {
    bools: Vec<bool>,
    ints: Vec<i64>,
    /// objective value when an objective was set
    pub objective: Option<i64>,
}

impl Model {
    pub fn bool(&self, v: BoolVar) -> bool {
        self.bools[v.0 as usize]
    }

    pub fn lit(&self, l: Lit) -> bool {
        self.bools[l.var_index()] != l.is_negated()
    }

    pub fn int(&self, x: IntVar) -> i64 {
        self.ints[x.0 as usize]
    }

    pub fn eval(&self, e: &LinExpr) -> i64 {
        e.constant
            + e.bools
                .iter()
                .map(|&(l, c)| if self.lit(l) { c } else { 0 })
                .sum::<i64>()
            + e.ints.iter().map(|&(x, c)| c * self.int(x)).sum::<i64>()
    }

    pub fn atom_holds(&self, a: &DiffAtom) -> bool {
        self.int(a.x) - self.int(a.y) <= a.k
    }
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Sat(Model),
    Unsat,
    /// A deadline fired before the search finished.
    Timeout,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }
}

/// Search statistics accumulated over the lifetime of a context.
#[derive(Debug, Default, Clone, Copy)]
pub struct SearchStats {
    pub checks: u64,
    pub conflicts: u64,
    pub decisions: u64,
}

/// Variables, constraints and an optional objective; single-threaded.
pub struct Context {
    bool_names: Vec<String>,
    int_names: Vec<String>,
    int_bounds: Vec<(i64, Option<i64>)>,
    atoms: Vec<Option<DiffAtom>>,
    atom_lookup: HashMap<(u32, u32, i64), BoolVar>,
    clauses: Vec<Vec<Lit>>,
    constraints: Vec<Constraint>,
    groups: Vec<Vec<Lit>>,
    phases: Vec<Option<bool>>,
    objective: Option<LinExpr>,
    /// known lower bound on the objective; a model reaching it is optimal
    floor: Option<i64>,
    deadline: Option<Instant>,
    engine: Engine,
    synced_clauses: usize,
    synced_phases: usize,
    synced_atoms: usize,
    true_lit: Lit,
    zero: IntVar,
    aux_count: usize,
}

impl Default for Context {
    fn default() -> Self {
        Self::new()
    }
}

impl Context {
    pub fn new() -> Self {
        let mut ctx = Context {
            bool_names: Vec::new(),
            int_names: Vec::new(),
            int_bounds: Vec::new(),
            atoms: Vec::new(),
            atom_lookup: HashMap::new(),
            clauses: Vec::new(),
            constraints: Vec::new(),
            groups: Vec::new(),
            phases: Vec::new(),
            objective: None,
            floor: None,
            deadline: None,
            engine: Engine::new(),
            synced_clauses: 0,
            synced_phases: 0,
            synced_atoms: 0,
            true_lit: Lit(0),
            zero: IntVar(0),
            aux_count: 0,
        };
        let t = ctx.new_bool("true");
        ctx.true_lit = Lit::positive(t);
        ctx.clauses.push(vec![ctx.true_lit]);
        ctx.int_names.push("zero".into());
        ctx.int_bounds.push((0, Some(0)));
        ctx
    }

    pub fn true_lit(&self) -> Lit {
        self.true_lit
    }

    pub fn new_bool(&mut self, name: impl Into<String>) -> BoolVar {
        let v = BoolVar(self.bool_names.len() as u32);
        self.bool_names.push(name.into());
        self.atoms.push(None);
        self.phases.push(None);
        v
    }

    fn new_aux(&mut self) -> Lit {
        self.aux_count += 1;
        let name = format!("_aux{}", self.aux_count);
        Lit::positive(self.new_bool(name))
    }

    /// New integer variable with domain `[lower, upper]` (`upper = None` is unbounded).
    pub fn new_int(&mut self, name: impl Into<String>, lower: i64, upper: Option<i64>) -> IntVar {
        let x = IntVar(self.int_names.len() as u32);
        self.int_names.push(name.into());
        self.int_bounds.push((lower, upper));
        let lo = self.ge(x, lower);
        self.clauses.push(vec![lo]);
        if let Some(hi) = upper {
            let hi = self.le(x, hi);
            self.clauses.push(vec![hi]);
        }
        x
    }

    pub fn num_bools(&self) -> usize {
        self.bool_names.len()
    }

    pub fn num_ints(&self) -> usize {
        self.int_names.len()
    }

    pub fn bool_name(&self, v: BoolVar) -> &str {
        &self.bool_names[v.0 as usize]
    }

    pub fn int_name(&self, x: IntVar) -> &str {
        &self.int_names[x.0 as usize]
    }

    pub fn int_bounds(&self, x: IntVar) -> (i64, Option<i64>) {
        self.int_bounds[x.0 as usize]
    }

    /// Literal equivalent to `x - y <= k`.
    pub fn diff_le(&mut self, x: IntVar, y: IntVar, k: i64) -> Lit {
        if x == y {
            return if 0 <= k {
                self.true_lit
            } else {
                !self.true_lit
            };
        }
        if let Some(&v) = self.atom_lookup.get(&(x.0, y.0, k)) {
            return Lit::positive(v);
        }
        // !(y - x <= -k - 1) is x - y <= k
        if let Some(&v) = self.atom_lookup.get(&(y.0, x.0, -k - 1)) {
            return !Lit::positive(v);
        }
        let name = format!(
            "({} - {} <= {})",
            self.int_names[x.0 as usize], self.int_names[y.0 as usize], k
        );
        let v = self.new_bool(name);
        self.atoms[v.0 as usize] = Some(DiffAtom { x, y, k });
        self.atom_lookup.insert((x.0, y.0, k), v);
        Lit::positive(v)
    }

    /// `x - y >= k`
    pub fn diff_ge(&mut self, x: IntVar, y: IntVar, k: i64) -> Lit {
        self.diff_le(y, x, -k)
    }

    /// `x <= k`
    pub fn le(&mut self, x: IntVar, k: i64) -> Lit {
        let z = self.zero;
        self.diff_le(x, z, k)
    }

    /// `x >= k`
    pub fn ge(&mut self, x: IntVar, k: i64) -> Lit {
        let z = self.zero;
        self.diff_le(z, x, -k)
    }

    pub fn atom(&self, v: BoolVar) -> Option<DiffAtom> {
        self.atoms[v.0 as usize]
    }

    /// Preferred polarity when the search first branches on `v`.
    pub fn set_phase(&mut self, v: BoolVar, value: bool) {
        self.phases[v.0 as usize] = Some(value);
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn set_timeout(&mut self, timeout: Duration) {
        self.deadline = Some(Instant::now() + timeout);
    }

    pub fn clause(lits: impl IntoIterator<Item = Lit>) -> Constraint {
        Constraint::Clause(lits.into_iter().collect())
    }

    /// Exactly one of `lits` holds.
    pub fn exactly_one(lits: &[Lit]) -> Result<Constraint, BackendError> {
        if lits.is_empty() {
            return Err(BackendError::EmptyCardinality);
        }
        Ok(Constraint::Exactly {
            lits: lits.to_vec(),
            n: 1,
        })
    }

    /// Exactly `n` of `lits` hold.
    pub fn exactly_n(lits: &[Lit], n: usize) -> Result<Constraint, BackendError> {
        if n > lits.len() {
            return Err(BackendError::CardinalityOutOfRange {
                n,
                len: lits.len(),
            });
        }
        Ok(Constraint::Exactly {
            lits: lits.to_vec(),
            n,
        })
    }

    /// `if cond then a else b`. Constant branches give a pseudo-boolean term;
    /// branches of the form `x + c` introduce an auxiliary integer.
    pub fn ite(&mut self, cond: Lit, a: LinExpr, b: LinExpr) -> Result<LinExpr, BackendError> {
        if a.is_constant() && b.is_constant() {
            let mut e = LinExpr::constant(b.constant);
            if a.constant != b.constant {
                e.bools.push((cond, a.constant - b.constant));
            }
            return Ok(e);
        }
        let to_var = |ctx: &mut Context, e: &LinExpr| -> Result<(IntVar, i64), BackendError> {
            if e.is_constant() {
                Ok((ctx.zero, e.constant))
            } else {
                e.as_offset_var()
                    .ok_or_else(|| BackendError::NonDifference(format!("{e:?}")))
            }
        };
        let (xa, ca) = to_var(self, &a)?;
        let (xb, cb) = to_var(self, &b)?;
        let lo = (self.int_bounds[xa.0 as usize].0 + ca).min(self.int_bounds[xb.0 as usize].0 + cb);
        let z = self.new_int(format!("_ite{}", self.aux_count), lo, None);
        self.aux_count += 1;
        // cond => z - xa = ca ; !cond => z - xb = cb
        for (guard, x, c) in [(cond, xa, ca), (!cond, xb, cb)] {
            let le = self.diff_le(z, x, c);
            let ge = self.diff_ge(z, x, c);
            self.clauses.push(vec![!guard, le]);
            self.clauses.push(vec![!guard, ge]);
        }
        Ok(LinExpr::int(z))
    }

    pub fn assert(&mut self, c: Constraint) {
        match &c {
            Constraint::Clause(lits) => self.clauses.push(lits.clone()),
            Constraint::Exactly { lits, n } => {
                if *n == 1 {
                    self.groups.push(lits.clone());
                }
                self.encode_exactly(lits.clone(), *n);
            }
        }
        self.constraints.push(c);
    }

    pub fn assert_lit(&mut self, l: Lit) {
        self.assert(Constraint::Clause(vec![l]));
    }

    /// `a => b`
    pub fn assert_implies(&mut self, a: Lit, b: Lit) {
        self.assert(Constraint::Clause(vec![!a, b]));
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Atoms and bounds are treated as constraints too; returns every clause the
    /// engine sees (including cardinality encodings).
    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    fn encode_exactly(&mut self, lits: Vec<Lit>, n: usize) {
        let len = lits.len();
        if n == 0 {
            for l in lits {
                self.clauses.push(vec![!l]);
            }
            return;
        }
        if n == len {
            for l in lits {
                self.clauses.push(vec![l]);
            }
            return;
        }
        if n == 1 && len <= 8 {
            self.clauses.push(lits.clone());
            for i in 0..len {
                for j in (i + 1)..len {
                    self.clauses.push(vec![!lits[i], !lits[j]]);
                }
            }
            return;
        }
        let out = self.totalizer(&lits, n + 1);
        self.clauses.push(vec![out[n - 1]]);
        if n < out.len() {
            self.clauses.push(vec![!out[n]]);
        }
    }

    /// Literal that holds iff exactly `n` of `lits` hold.
    pub fn card_eq(&mut self, lits: &[Lit], n: usize) -> Lit {
        let len = lits.len();
        if n > len {
            return !self.true_lit;
        }
        if len == 0 {
            return self.true_lit;
        }
        let out = self.totalizer(lits, n + 1);
        let at_least = |k: usize, t: Lit| -> Lit {
            if k == 0 {
                t
            } else if k <= out.len() {
                out[k - 1]
            } else {
                !t
            }
        };
        let ge_n = at_least(n, self.true_lit);
        let ge_n1 = at_least(n + 1, self.true_lit);
        let e = self.new_aux();
        self.clauses.push(vec![!e, ge_n]);
        self.clauses.push(vec![!e, !ge_n1]);
        self.clauses.push(vec![e, !ge_n, ge_n1]);
        e
    }

    /// Totalizer outputs `o[i]` (0-based) with `o[i] <=> count >= i + 1`,
    /// saturating at `cap`.
    #[allow(clippy::needless_range_loop)]
    fn totalizer(&mut self, lits: &[Lit], cap: usize) -> Vec<Lit> {
        if lits.len() == 1 {
            return vec![lits[0]];
        }
        let mid = lits.len() / 2;
        let a = self.totalizer(&lits[..mid], cap);
        let b = self.totalizer(&lits[mid..], cap);
        let m = (a.len() + b.len()).min(cap);
        let r: Vec<Lit> = (0..m).map(|_| self.new_aux()).collect();
        let (p, q) = (a.len(), b.len());
        // count_a >= i and count_b >= j  =>  count >= i + j
        for i in 0..=p {
            for j in 0..=q {
                if i + j == 0 {
                    continue;
                }
                let k = (i + j).min(m);
                let mut c = Vec::with_capacity(3);
                if i > 0 {
                    c.push(!a[i - 1]);
                }
                if j > 0 {
                    c.push(!b[j - 1]);
                }
                c.push(r[k - 1]);
                self.clauses.push(c);
            }
        }
        // count_a <= i and count_b <= j  =>  count <= i + j
        for i in 0..=p {
            for j in 0..=q {
                let k = i + j + 1;
                if k > m {
                    continue;
                }
                let mut c = Vec::with_capacity(3);
                if i < p {
                    c.push(a[i]);
                } else if p >= cap {
                    continue;
                }
                if j < q {
                    c.push(b[j]);
                } else if q >= cap {
                    continue;
                }
                c.push(!r[k - 1]);
                self.clauses.push(c);
            }
        }
        r
    }

    pub fn minimize(&mut self, objective: LinExpr) {
        self.objective = Some(objective);
    }

    pub fn clear_objective(&mut self) {
        self.objective = None;
        self.floor = None;
    }

    /// Declares that no model has an objective value below `floor`, so
    /// minimization can stop as soon as it finds a model at that value.
    pub fn set_objective_floor(&mut self, floor: Option<i64>) {
        self.floor = floor;
    }

    pub fn objective(&self) -> Option<&LinExpr> {
        self.objective.as_ref()
    }

    fn sync(&mut self) {
        self.engine.ensure_vars(self.bool_names.len());
        self.engine.ensure_ints(self.int_names.len());
        for v in self.synced_atoms..self.bool_names.len() {
            if let Some(a) = self.atoms[v] {
                self.engine.set_atom(
                    v as u32,
                    EngineAtom {
                        x: a.x.0,
                        y: a.y.0,
                        k: a.k,
                    },
                );
            }
        }
        for v in self.synced_phases..self.phases.len() {
            if let Some(p) = self.phases[v] {
                self.engine.set_phase(v as u32, p);
            }
        }
        self.synced_atoms = self.bool_names.len();
        self.synced_phases = self.phases.len();
        self.engine.reset();
        for c in &self.clauses[self.synced_clauses..] {
            self.engine.add_clause(c);
        }
        self.synced_clauses = self.clauses.len();
    }

    fn extract_model(&mut self) -> Model {
        let bools = self.engine.bool_model();
        let ints = self
            .engine
            .int_model(self.zero.0 as usize)
            .into_iter()
            .map(|v| v.expect("every integer has a lower bound"))
            .collect();
        self.engine.reset();
        let mut model = Model {
            bools,
            ints,
            objective: None,
        };
        if let Some(obj) = &self.objective {
            model.objective = Some(model.eval(obj));
        }
        model
    }

    /// Satisfiability only; ignores the objective.
    pub fn check(&mut self) -> Outcome {
        self.sync();
        self.engine.set_objective(None);
        let status = self.engine.solve(&[], self.deadline);
        match status {
            Status::Sat => Outcome::Sat(self.extract_model()),
            Status::Unsat => Outcome::Unsat,
            Status::Timeout => Outcome::Timeout,
        }
    }

    /// Finds a model minimizing the objective (if any), or proves there is none.
    pub fn check_minimize(&mut self) -> Result<Outcome, BackendError> {
        let Some(objective) = self.objective.clone() else {
            return Ok(self.check());
        };
        enum Shape {
            Pseudo { constant: i64, terms: Vec<(Lit, i64)> },
            Single { x: IntVar, coef: i64, constant: i64 },
        }
        let shape = if objective.ints.is_empty() {
            let (constant, terms) = normalize_pb(&objective);
            Shape::Pseudo { constant, terms }
        } else if objective.bools.is_empty()
            && objective.ints.len() == 1
            && objective.ints[0].1 > 0
        {
            Shape::Single {
                x: objective.ints[0].0,
                coef: objective.ints[0].1,
                constant: objective.constant,
            }
        } else {
            return Err(BackendError::UnsupportedObjective(
                "objective must be pseudo-boolean or a single integer with positive coefficient"
                    .into(),
            ));
        };

        self.engine.set_objective(None);
        self.sync();
        let first = self.engine.solve(&[], self.deadline);
        let mut best = match first {
            Status::Sat => self.extract_model(),
            Status::Unsat => return Ok(Outcome::Unsat),
            Status::Timeout => return Ok(Outcome::Timeout),
        };

        let groups = self.groups.clone();
        let mut acts = Vec::new();
        let outcome = loop {
            let value = best.objective.expect("objective evaluated");
            if self.floor.is_some_and(|f| value <= f) {
                break Outcome::Sat(best);
            }
            let act = self.new_aux();
            acts.push(act);
            match &shape {
                Shape::Pseudo { constant, terms } => {
                    self.sync();
                    let relevant = disjoint_groups(&groups, terms);
                    self.engine.set_objective(Some(ObjectiveBound {
                        act,
                        bound: value - 1 - constant,
                        terms: terms.clone(),
                        groups: relevant,
                    }));
                }
                Shape::Single { x, coef, constant } => {
                    // coef * x + constant <= value - 1
                    let k = (value - 1 - constant).div_euclid(*coef);
                    let bound = self.le(*x, k);
                    self.clauses.push(vec![!act, bound]);
                    self.sync();
                }
            }
            match self.engine.solve(&[act], self.deadline) {
                Status::Sat => best = self.extract_model(),
                Status::Unsat => break Outcome::Sat(best),
                Status::Timeout => break Outcome::Timeout,
            }
        };
        // retire the bound guards so later checks see the original problem
        self.engine.set_objective(None);
        for act in acts {
            self.clauses.push(vec![!act]);
        }
        self.sync();
        Ok(outcome)
    }

    pub fn stats(&self) -> SearchStats {
        SearchStats {
            checks: 0,
            conflicts: self.engine.stats.conflicts,
            decisions: self.engine.stats.decisions,
        }
    }

    /// SMT-LIB 2 rendering of the context, for cross-checking with external tools.
    pub fn to_smtlib(&self) -> String {
        smtlib::render(self)
    }
}

/// Exactly-one groups that mention an objective literal, keeping only groups
/// disjoint from those already chosen.
fn disjoint_groups(groups: &[Vec<Lit>], terms: &[(Lit, i64)]) -> Vec<Vec<Lit>> {
    let weighted: std::collections::HashSet<Lit> = terms.iter().map(|&(l, _)| l).collect();
    let mut taken: std::collections::HashSet<BoolVar> = std::collections::HashSet::new();
    let mut out = Vec::new();
    for g in groups {
        if !g.iter().any(|l| weighted.contains(l)) {
            continue;
        }
        let mut vars: Vec<BoolVar> = g.iter().map(|l| l.var()).collect();
        vars.sort();
        let dup = vars.windows(2).any(|w| w[0] == w[1]);
        if dup || vars.iter().any(|v| taken.contains(v)) {
            continue;
        }
        taken.extend(vars);
        out.push(g.clone());
    }
    out
}

/// Rewrites `sum c_i * l_i` with arbitrary-sign coefficients into
/// `constant + sum w_i * l_i` with `w_i > 0`, merging repeated literals.
fn normalize_pb(e: &LinExpr) -> (i64, Vec<(Lit, i64)>) {
    let mut by_var: HashMap<BoolVar, i64> = HashMap::new();
    let mut constant = e.constant;
    for &(l, c) in &e.bools {
        // c * l  with l = !v  is  c - c * v
        if l.is_negated() {
            constant += c;
            *by_var.entry(l.var()).or_default() -= c;
        } else {
            *by_var.entry(l.var()).or_default() += c;
        }
    }
    let mut terms: Vec<(Lit, i64)> = Vec::new();
    let mut vars: Vec<_> = by_var.into_iter().collect();
    vars.sort();
    for (v, c) in vars {
        let l = Lit::positive(v);
        match c.cmp(&0) {
            std::cmp::Ordering::Greater => terms.push((l, c)),
            std::cmp::Ordering::Less => {
                constant += c;
                terms.push((!l, -c));
            }
            std::cmp::Ordering::Equal => {}
        }
    }
    (constant, terms)
}

#[cfg(test)]
mod tests;
