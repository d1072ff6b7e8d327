//! Conflict-driven clause learning over boolean variables, with difference-logic
//! atoms checked eagerly and an optional objective-bound propagator.

use std::time::Instant;

use super::diff::DiffGraph;
use super::Lit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    True,
    False,
    Undef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reason {
    Decision,
    Clause(u32),
}

#[derive(Debug)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

/// `x - y <= k`
#[derive(Debug, Clone, Copy)]
pub(crate) struct EngineAtom {
    pub x: u32,
    pub y: u32,
    pub k: i64,
}

/// `act => sum(weight * lit) <= bound`, where lits inside one group are known to
/// satisfy "exactly one" (so every group without a true literal costs at least its
/// cheapest non-false member).
#[derive(Debug, Clone)]
pub(crate) struct ObjectiveBound {
    pub act: Lit,
    pub bound: i64,
    /// (lit, weight > 0)
    pub terms: Vec<(Lit, i64)>,
    /// groups of literals, each satisfying exactly-one; weights looked up in `terms`
    pub groups: Vec<Vec<Lit>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Sat,
    Unsat,
    Timeout,
}

enum SearchResult {
    Sat,
    Unsat,
    Restart,
    Timeout,
}

#[derive(Debug, Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn higher(act: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn grow(&mut self, n: usize) {
        if self.pos.len() < n {
            self.pos.resize(n, None);
        }
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize].is_some()
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v as usize] = Some(i);
        self.sift_up(i, act);
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        if let Some(i) = self.pos[v as usize] {
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().expect("non-empty");
        self.pos[top as usize] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if !Self::higher(act, v, p) {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && Self::higher(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if !Self::higher(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct EngineStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
}

#[derive(Debug, Default)]
pub(crate) struct Engine {
    assigns: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    seen: Vec<bool>,
    atoms: Vec<Option<EngineAtom>>,
    heap: VarHeap,
    var_inc: f64,
    cla_inc: f64,

    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,

    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    num_learnts: usize,
    max_learnts: f64,

    diff: DiffGraph,
    objective: Option<ObjectiveBound>,
    /// weight per literal index, filled from `objective`
    obj_weight: Vec<i64>,
    obj_ungrouped: Vec<(Lit, i64)>,

    root_unsat: bool,
    pub stats: EngineStats,
}

const VAR_DECAY: f64 = 0.95;
const CLA_DECAY: f64 = 0.999;

impl Engine {
    pub(crate) fn new() -> Self {
        Engine {
            var_inc: 1.0,
            cla_inc: 1.0,
            max_learnts: 4000.0,
            ..Default::default()
        }
    }

    pub(crate) fn ensure_vars(&mut self, n: usize) {
        let old = self.assigns.len();
        if n <= old {
            return;
        }
        self.assigns.resize(n, Value::Undef);
        self.level.resize(n, 0);
        self.reason.resize(n, Reason::Decision);
        self.phase.resize(n, false);
        self.activity.resize(n, 0.0);
        self.seen.resize(n, false);
        self.atoms.resize(n, None);
        self.watches.resize_with(2 * n, Vec::new);
        self.obj_weight.resize(2 * n, 0);
        self.heap.grow(n);
        for v in old..n {
            self.heap.insert(v as u32, &self.activity);
        }
    }

    pub(crate) fn ensure_ints(&mut self, n: usize) {
        self.diff.ensure_nodes(n);
    }

    pub(crate) fn set_atom(&mut self, var: u32, atom: EngineAtom) {
        self.atoms[var as usize] = Some(atom);
    }

    pub(crate) fn set_phase(&mut self, var: u32, phase: bool) {
        self.phase[var as usize] = phase;
    }

    pub(crate) fn set_objective(&mut self, objective: Option<ObjectiveBound>) {
        if let Some(old) = &self.objective {
            for &(l, _) in &old.terms {
                self.obj_weight[l.index()] = 0;
            }
        }
        self.obj_ungrouped.clear();
        if let Some(new) = &objective {
            for &(l, w) in &new.terms {
                self.obj_weight[l.index()] = w;
            }
            let grouped: std::collections::HashSet<Lit> =
                new.groups.iter().flatten().copied().collect();
            self.obj_ungrouped = new
                .terms
                .iter()
                .filter(|(l, _)| !grouped.contains(l))
                .copied()
                .collect();
        }
        self.objective = objective;
    }

    fn value(&self, l: Lit) -> Value {
        match self.assigns[l.var_index()] {
            Value::Undef => Value::Undef,
            Value::True if !l.is_negated() => Value::True,
            Value::False if l.is_negated() => Value::True,
            _ => Value::False,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a permanent clause; must be called at decision level 0.
    pub(crate) fn add_clause(&mut self, lits: &[Lit]) {
        debug_assert_eq!(self.decision_level(), 0);
        if self.root_unsat {
            return;
        }
        let mut c: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match self.value(l) {
                Value::True => return,
                Value::False => {}
                Value::Undef => {
                    if c.contains(&!l) {
                        return;
                    }
                    if !c.contains(&l) {
                        c.push(l);
                    }
                }
            }
        }
        match c.len() {
            0 => self.root_unsat = true,
            1 => {
                self.enqueue(c[0], Reason::Decision);
                if self.propagate().is_some() {
                    self.root_unsat = true;
                }
            }
            _ => {
                self.attach(c, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].index()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].index()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        if learnt {
            self.num_learnts += 1;
        }
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Reason) {
        let v = l.var_index();
        debug_assert_eq!(self.assigns[v], Value::Undef);
        self.assigns[v] = if l.is_negated() {
            Value::False
        } else {
            Value::True
        };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Orders a lemma whose literals are all false except possibly `lits[0]`:
    /// puts the highest-level literal among the rest in slot 1.
    fn order_lemma(&self, lits: &mut [Lit], skip_first: bool) {
        let start = usize::from(skip_first);
        let mut best = start;
        for i in start..lits.len() {
            if self.level[lits[i].var_index()] > self.level[lits[best].var_index()] {
                best = i;
            }
        }
        lits.swap(start, best);
        if !skip_first && lits.len() > 1 {
            let mut best = 1;
            for i in 1..lits.len() {
                if self.level[lits[i].var_index()] > self.level[lits[best].var_index()] {
                    best = i;
                }
            }
            lits.swap(1, best);
        }
    }

    /// Records an all-false lemma as a learnt clause and returns it as a conflict.
    fn conflict_lemma(&mut self, mut lits: Vec<Lit>) -> u32 {
        lits.sort_unstable();
        lits.dedup();
        if lits.len() == 1 {
            // Unit conflict: keep as a two-watched clause by duplicating the
            // literal's falsity through an explicit root check later.
            let cref = self.clauses.len() as u32;
            self.clauses.push(Clause {
                lits,
                learnt: true,
                deleted: false,
                activity: 0.0,
            });
            self.num_learnts += 1;
            return cref;
        }
        self.order_lemma(&mut lits, false);
        self.attach(lits, true)
    }

    /// Propagates `lits[0]` with the remaining (false) literals as reason.
    fn propagate_lemma(&mut self, mut lits: Vec<Lit>) {
        let implied = lits[0];
        if lits.len() == 1 {
            let cref = self.clauses.len() as u32;
            self.clauses.push(Clause {
                lits,
                learnt: true,
                deleted: false,
                activity: 0.0,
            });
            self.num_learnts += 1;
            self.enqueue(implied, Reason::Clause(cref));
            return;
        }
        self.order_lemma(&mut lits, true);
        let cref = self.attach(lits, true);
        self.enqueue(implied, Reason::Clause(cref));
    }

    fn propagate(&mut self) -> Option<u32> {
        loop {
            while self.qhead < self.trail.len() {
                let p = self.trail[self.qhead];
                let trail_index = self.qhead;
                self.qhead += 1;
                self.stats.propagations += 1;

                if let Some(atom) = self.atoms[p.var_index()] {
                    // x - y <= k  : edge y -> x weight k
                    // !(x - y <= k) : y - x <= -k - 1 : edge x -> y weight -k-1
                    let (s, t, w) = if p.is_negated() {
                        (atom.x, atom.y, -atom.k - 1)
                    } else {
                        (atom.y, atom.x, atom.k)
                    };
                    if let Err(cycle) = self.diff.add(s, t, w, p, trail_index) {
                        let lits: Vec<Lit> = cycle.into_iter().map(|l| !l).collect();
                        return Some(self.conflict_lemma(lits));
                    }
                }

                if let Some(confl) = self.propagate_clauses(p) {
                    return Some(confl);
                }
            }
            match self.propagate_objective() {
                Err(confl) => return Some(confl),
                Ok(true) => continue,
                Ok(false) => return None,
            }
        }
    }

    fn propagate_clauses(&mut self, p: Lit) -> Option<u32> {
        let false_lit = !p;
        let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
        let mut i = 0;
        let mut j = 0;
        let mut conflict = None;
        while i < ws.len() {
            let w = ws[i];
            i += 1;
            let cref = w.cref as usize;
            if self.clauses[cref].deleted {
                continue;
            }
            if self.value(w.blocker) == Value::True {
                ws[j] = w;
                j += 1;
                continue;
            }
            {
                let c = &mut self.clauses[cref].lits;
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
            }
            let first = self.clauses[cref].lits[0];
            if first != w.blocker && self.value(first) == Value::True {
                ws[j] = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                continue;
            }
            let len = self.clauses[cref].lits.len();
            let mut moved = false;
            for k in 2..len {
                let l = self.clauses[cref].lits[k];
                if self.value(l) != Value::False {
                    self.clauses[cref].lits.swap(1, k);
                    self.watches[l.index()].push(Watcher {
                        cref: w.cref,
                        blocker: first,
                    });
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            ws[j] = Watcher {
                cref: w.cref,
                blocker: first,
            };
            j += 1;
            if self.value(first) == Value::False {
                conflict = Some(w.cref);
                while i < ws.len() {
                    ws[j] = ws[i];
                    j += 1;
                    i += 1;
                }
            } else {
                self.enqueue(first, Reason::Clause(w.cref));
            }
        }
        ws.truncate(j);
        self.watches[false_lit.index()] = ws;
        conflict
    }

    /// Returns Ok(true) when new literals were assigned.
    fn propagate_objective(&mut self) -> Result<bool, u32> {
        let Some(obj) = &self.objective else {
            return Ok(false);
        };
        if self.value(obj.act) != Value::True {
            return Ok(false);
        }
        let act = obj.act;
        let bound = obj.bound;

        // Lower bound: true literals, plus cheapest non-false member of every
        // group that has no true literal yet.
        let mut lb = 0i64;
        let mut reason: Vec<Lit> = vec![!act];
        for &(l, w) in &obj.terms {
            if self.value(l) == Value::True {
                lb += w;
                reason.push(!l);
            }
        }
        // (group index, group min over non-false members, has_true)
        let mut group_min: Vec<Option<i64>> = Vec::with_capacity(obj.groups.len());
        for g in &obj.groups {
            let mut has_true = false;
            let mut min = i64::MAX;
            for &l in g {
                match self.value(l) {
                    Value::True => has_true = true,
                    Value::Undef => min = min.min(self.obj_weight[l.index()]),
                    Value::False => {}
                }
            }
            if has_true {
                group_min.push(None);
            } else if min == i64::MAX {
                // every member false: the exactly-one constraint will fail on its own
                group_min.push(None);
            } else {
                lb += min;
                group_min.push(Some(min));
                if min > 0 {
                    for &l in g {
                        if self.value(l) == Value::False && self.obj_weight[l.index()] < min {
                            reason.push(l);
                        }
                    }
                }
            }
        }

        if lb > bound {
            let lits = reason;
            return Err(self.conflict_lemma(lits));
        }

        let slack = bound - lb;
        let mut implied: Vec<(Lit, Option<usize>)> = Vec::new();
        for (gi, g) in obj.groups.iter().enumerate() {
            if let Some(min) = group_min[gi] {
                for &l in g {
                    if self.value(l) == Value::Undef && self.obj_weight[l.index()] - min > slack {
                        implied.push((!l, Some(gi)));
                    }
                }
            }
        }
        for &(l, w) in &self.obj_ungrouped {
            if self.value(l) == Value::Undef && w > slack {
                implied.push((!l, None));
            }
        }
        if implied.is_empty() {
            return Ok(false);
        }
        let groups = obj.groups.clone();
        let mut any = false;
        for (lit, gi) in implied {
            if self.value(lit) != Value::Undef {
                continue;
            }
            let mut lits = vec![lit];
            for &r in &reason {
                // drop the justification of the group the implied literal belongs to
                if let Some(gi) = gi {
                    if groups[gi].contains(&r) {
                        continue;
                    }
                }
                lits.push(r);
            }
            self.propagate_lemma(lits);
            any = true;
        }
        Ok(any)
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in &mut self.clauses {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learnt: Vec<Lit> = vec![Lit(0)];
        let mut path_c = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut confl = confl as usize;
        loop {
            self.bump_clause(confl);
            let lits = self.clauses[confl].lits.clone();
            let start = usize::from(p.is_some());
            for &q in &lits[start..] {
                let v = q.var_index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path_c += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var_index()] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[pl.var_index()] = false;
            path_c -= 1;
            if path_c == 0 {
                break;
            }
            match self.reason[pl.var_index()] {
                Reason::Clause(c) => confl = c as usize,
                Reason::Decision => unreachable!("decision literal before the UIP"),
            }
        }
        learnt[0] = !p.expect("UIP literal");
        for l in &learnt[1..] {
            self.seen[l.var_index()] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for i in 1..learnt.len() {
                if self.level[learnt[i].var_index()] > self.level[learnt[best].var_index()] {
                    best = i;
                }
            }
            learnt.swap(1, best);
            bt = self.level[learnt[1].var_index()];
        }
        (learnt, bt)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var_index();
            self.phase[v] = !l.is_negated();
            self.assigns[v] = Value::Undef;
            self.reason[v] = Reason::Decision;
            self.heap.insert(v as u32, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
        self.diff.backtrack(lim);
    }

    fn max_level(&self, cref: u32) -> u32 {
        self.clauses[cref as usize]
            .lits
            .iter()
            .map(|l| self.level[l.var_index()])
            .max()
            .unwrap_or(0)
    }

    fn reduce_db(&mut self) {
        let mut locked = vec![false; self.clauses.len()];
        for &l in &self.trail {
            if let Reason::Clause(c) = self.reason[l.var_index()] {
                locked[c as usize] = true;
            }
        }
        let mut cands: Vec<(f64, usize)> = self
            .clauses
            .iter()
            .enumerate()
            .filter(|(i, c)| c.learnt && !c.deleted && c.lits.len() > 2 && !locked[*i])
            .map(|(i, c)| (c.activity, i))
            .collect();
        cands.sort_by(|a, b| a.0.total_cmp(&b.0));
        let remove = cands.len() / 2;
        for &(_, i) in &cands[..remove] {
            self.clauses[i].deleted = true;
            self.clauses[i].lits = Vec::new();
            self.num_learnts -= 1;
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v as usize] == Value::Undef {
                let pos = Lit(v << 1);
                return Some(if self.phase[v as usize] { pos } else { !pos });
            }
        }
        None
    }

    fn search(
        &mut self,
        conflict_budget: u64,
        assumptions: &[Lit],
        deadline: Option<Instant>,
    ) -> SearchResult {
        let mut conflicts = 0u64;
        let mut ticks = 0u64;
        loop {
            ticks += 1;
            if ticks.is_multiple_of(128) {
                if let Some(d) = deadline {
                    if Instant::now() >= d {
                        return SearchResult::Timeout;
                    }
                }
            }
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                let lvl = self.max_level(confl);
                if lvl == 0 {
                    self.root_unsat = true;
                    return SearchResult::Unsat;
                }
                if lvl < self.decision_level() {
                    self.backtrack(lvl);
                }
                if self.clauses[confl as usize].lits.len() == 1 {
                    // a unit conflict lemma: its literal is false at `lvl`
                    let l = self.clauses[confl as usize].lits[0];
                    self.backtrack(0);
                    if self.value(l) == Value::False {
                        self.root_unsat = true;
                        return SearchResult::Unsat;
                    }
                    if self.value(l) == Value::Undef {
                        self.enqueue(l, Reason::Clause(confl));
                    }
                    continue;
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    let cref = self.clauses.len() as u32;
                    self.clauses.push(Clause {
                        lits: learnt.clone(),
                        learnt: true,
                        deleted: false,
                        activity: 0.0,
                    });
                    self.enqueue(learnt[0], Reason::Clause(cref));
                } else {
                    let l0 = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref as usize);
                    self.enqueue(l0, Reason::Clause(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLA_DECAY;
            } else {
                if conflicts >= conflict_budget {
                    self.backtrack(0);
                    return SearchResult::Restart;
                }
                if self.num_learnts as f64 > self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                let dl = self.decision_level() as usize;
                if dl < assumptions.len() {
                    let a = assumptions[dl];
                    match self.value(a) {
                        Value::True => {
                            self.trail_lim.push(self.trail.len());
                        }
                        Value::False => {
                            return SearchResult::Unsat;
                        }
                        Value::Undef => {
                            self.trail_lim.push(self.trail.len());
                            self.enqueue(a, Reason::Decision);
                        }
                    }
                    continue;
                }
                match self.pick_branch() {
                    None => return SearchResult::Sat,
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, Reason::Decision);
                    }
                }
            }
        }
    }

    /// Runs the search. On `Sat` the assignment is left in place until the next
    /// call to [`Engine::reset`].
    pub(crate) fn solve(&mut self, assumptions: &[Lit], deadline: Option<Instant>) -> Status {
        self.backtrack(0);
        if self.root_unsat {
            return Status::Unsat;
        }
        if self.propagate().is_some() {
            self.root_unsat = true;
            return Status::Unsat;
        }
        let mut restart = 0u32;
        loop {
            let budget = 100 * luby(restart);
            restart += 1;
            match self.search(budget, assumptions, deadline) {
                SearchResult::Sat => return Status::Sat,
                SearchResult::Unsat => {
                    self.backtrack(0);
                    return Status::Unsat;
                }
                SearchResult::Timeout => {
                    self.backtrack(0);
                    return Status::Timeout;
                }
                SearchResult::Restart => {}
            }
        }
    }

    pub(crate) fn reset(&mut self) {
        self.backtrack(0);
    }

    pub(crate) fn bool_model(&self) -> Vec<bool> {
        self.assigns.iter().map(|v| *v == Value::True).collect()
    }

    pub(crate) fn int_model(&self, zero: usize) -> Vec<Option<i64>> {
        self.diff.least_solution(zero)
    }
}

fn luby(mut x: u32) -> u64 {
    let mut size = 1u32;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}
