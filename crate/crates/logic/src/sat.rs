//! Conflict-driven clause learning SAT solver.
//!
//! Two watched literals with blockers, 1UIP learning with local minimization,
//! VSIDS activities on a binary heap, phase saving, Luby restarts and
//! activity-based learnt clause reduction. No randomness: results depend only
//! on the clause order and the initial phases.
//!
//! The solver is incremental in the narrow sense MaxSAT needs: clauses may be
//! added between calls to [`Solver::solve`].

use crate::cnf::{Cnf, Lit, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Total assignment indexed by variable.
    Sat(Vec<bool>),
    Unsat,
    /// Conflict budget exhausted before a verdict.
    Unknown,
}

impl SolveResult {
    pub fn model(&self) -> Option<&[bool]> {
        match self {
            SolveResult::Sat(m) => Some(m),
            _ => None,
        }
    }
}

/// Solves the hard clauses of `cnf`; soft clauses are ignored.
pub fn solve_sat(cnf: &Cnf) -> Option<Vec<bool>> {
    let mut solver = Solver::new(cnf.num_vars());
    for c in cnf.hard_clauses() {
        if !solver.add_clause(&c.lits) {
            return None;
        }
    }
    match solver.solve() {
        SolveResult::Sat(m) => Some(m),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

type CRef = usize;

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: CRef,
    blocker: Lit,
}

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

/// Max-heap of variables keyed by activity.
#[derive(Debug, Default, Clone)]
struct VarHeap {
    heap: Vec<u32>,
    // position in `heap`, or usize::MAX when absent
    pos: Vec<usize>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.pos.resize(n, usize::MAX);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != usize::MAX
    }

    fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    fn less(act: &[f64], a: u32, b: u32) -> bool {
        // higher activity first; ties by lower index
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if Self::less(act, v, self.heap[parent]) {
                self.heap[i] = self.heap[parent];
                self.pos[self.heap[i] as usize] = i;
                i = parent;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
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
            let child = if r < n && Self::less(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if Self::less(act, self.heap[child], v) {
                self.heap[i] = self.heap[child];
                self.pos[self.heap[i] as usize] = i;
                i = child;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v as usize] = i;
        self.sift_up(i, act);
    }

    fn increased(&mut self, v: u32, act: &[f64]) {
        if let Some(&i) = self.pos.get(v as usize) {
            if i != usize::MAX {
                self.sift_up(i, act);
            }
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = usize::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }
}

/// Luby sequence value for index `i` (0-based): 1 1 2 1 1 2 4 ...
fn luby(mut i: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1u64 << seq
}

const RESTART_UNIT: u64 = 100;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

#[derive(Debug, Clone)]
pub struct Solver {
    clauses: Vec<ClauseData>,
    learnts: Vec<CRef>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<Option<CRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    max_learnts: f64,
    conflicts: u64,
}

impl Solver {
    pub fn new(num_vars: usize) -> Self {
        let mut s = Solver {
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            ok: true,
            max_learnts: 0.0,
            conflicts: 0,
        };
        for _ in 0..num_vars {
            s.new_var();
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    /// Number of conflicts seen across all calls.
    pub fn conflicts(&self) -> u64 {
        self.conflicts
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.assigns.len() as u32;
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.assigns.len());
        self.heap.insert(v, &self.activity);
        Var(v)
    }

    /// Preferred polarity for the first decision on `var`.
    pub fn set_phase(&mut self, var: Var, positive: bool) {
        self.phase[var.index()] = positive;
    }

    #[inline]
    fn value(&self, l: Lit) -> LBool {
        match self.assigns[l.var().index()] {
            LBool::Undef => LBool::Undef,
            LBool::True if l.is_positive() => LBool::True,
            LBool::False if !l.is_positive() => LBool::True,
            _ => LBool::False,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause at decision level 0. Returns false once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        for l in lits {
            while l.var().index() >= self.num_vars() {
                self.new_var();
            }
        }
        let mut ls: Vec<Lit> = lits.to_vec();
        ls.sort();
        ls.dedup();
        let mut out = Vec::with_capacity(ls.len());
        for (i, &l) in ls.iter().enumerate() {
            if i + 1 < ls.len() && ls[i + 1] == !l {
                return true; // tautology
            }
            match self.value(l) {
                LBool::True => return true,
                LBool::False => {}
                LBool::Undef => out.push(l),
            }
        }
        match out.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(out[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(out, false);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> CRef {
        let cref = self.clauses.len();
        let (a, b) = (lits[0], lits[1]);
        self.watches[(!a).code()].push(Watcher { cref, blocker: b });
        self.watches[(!b).code()].push(Watcher { cref, blocker: a });
        self.clauses.push(ClauseData {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Option<CRef>) {
        let v = l.var().index();
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = if l.is_positive() {
            LBool::True
        } else {
            LBool::False
        };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let c = &mut self.clauses[cref].lits;
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == LBool::True {
                    ws[j] = Watcher {
                        cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let lk = self.clauses[cref].lits[k];
                    if self.value(lk) != LBool::False {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[(!lk).code()].push(Watcher {
                            cref,
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
                    cref,
                    blocker: first,
                };
                j += 1;
                if self.value(first) == LBool::False {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit::new(Var(0), true)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let dl = self.decision_level();

        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            let lits = self.clauses[confl].lits.clone();
            for &q in &lits[start..] {
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[pl.var().index()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[pl.var().index()].expect("implied literal has a reason");
        }
        learnt[0] = !p.unwrap();

        // local minimization: drop literals implied by other learnt literals
        let mut keep = vec![learnt[0]];
        for &l in &learnt[1..] {
            let v = l.var().index();
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r].lits[1..].iter().all(|q| {
                    let qv = q.var().index();
                    self.seen[qv] || self.level[qv] == 0
                }),
            };
            if !redundant {
                keep.push(l);
            }
        }
        for &l in &learnt {
            self.seen[l.var().index()] = false;
        }
        let mut learnt = keep;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()]
        };
        (learnt, bt)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            self.assigns[v] = LBool::Undef;
            self.reason[v] = None;
            self.phase[v] = l.is_positive();
            self.heap.insert(v as u32, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while !self.heap.is_empty() {
            let v = self.heap.pop(&self.activity)?;
            if self.assigns[v as usize] == LBool::Undef {
                return Some(Lit::new(Var(v), self.phase[v as usize]));
            }
        }
        None
    }

    fn locked(&self, cref: CRef) -> bool {
        let l0 = self.clauses[cref].lits[0];
        self.value(l0) == LBool::True && self.reason[l0.var().index()] == Some(cref)
    }

    fn reduce_db(&mut self) {
        let mut ls: Vec<CRef> = self.learnts.clone();
        ls.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .partial_cmp(&self.clauses[b].activity)
                .unwrap()
                .then(a.cmp(&b))
        });
        let half = ls.len() / 2;
        for &c in &ls[..half] {
            if self.clauses[c].lits.len() > 2 && !self.locked(c) {
                self.clauses[c].deleted = true;
                self.clauses[c].lits.shrink_to_fit();
            }
        }
        self.learnts.retain(|&c| !self.clauses[c].deleted);
        let clauses = &self.clauses;
        for ws in self.watches.iter_mut() {
            ws.retain(|w| !clauses[w.cref].deleted);
        }
    }

    fn search(&mut self, nof_conflicts: u64, budget_left: &mut Option<u64>) -> LBool {
        let mut local_conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                local_conflicts += 1;
                if let Some(b) = budget_left.as_mut() {
                    *b = b.saturating_sub(1);
                }
                if self.decision_level() == 0 {
                    return LBool::False;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
            } else {
                if local_conflicts >= nof_conflicts || budget_left == &Some(0) {
                    self.cancel_until(0);
                    return LBool::Undef;
                }
                if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                    self.reduce_db();
                }
                match self.pick_branch() {
                    None => return LBool::True,
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }

    pub fn solve(&mut self) -> SolveResult {
        self.solve_limited(None)
    }

    /// Solves with an optional conflict budget counted from this call.
    pub fn solve_limited(&mut self, conflict_budget: Option<u64>) -> SolveResult {
        if !self.ok {
            return SolveResult::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult::Unsat;
        }
        let original = self.clauses.iter().filter(|c| !c.learnt).count();
        self.max_learnts = (original as f64 / 3.0).max(1000.0);
        let mut budget = conflict_budget;
        let mut restart = 0u64;
        loop {
            let status = self.search(luby(restart) * RESTART_UNIT, &mut budget);
            restart += 1;
            match status {
                LBool::True => {
                    let model = self
                        .assigns
                        .iter()
                        .map(|&a| a == LBool::True)
                        .collect();
                    self.cancel_until(0);
                    return SolveResult::Sat(model);
                }
                LBool::False => {
                    self.ok = false;
                    self.cancel_until(0);
                    return SolveResult::Unsat;
                }
                LBool::Undef => {
                    if budget == Some(0) {
                        self.cancel_until(0);
                        return SolveResult::Unknown;
                    }
                    self.max_learnts *= 1.1;
                }
            }
        }
    }
}
