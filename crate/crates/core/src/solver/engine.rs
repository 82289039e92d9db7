//! Depth-first search with forward checking, shared by every solver entry point.
//!
//! Hard constraints are enforced; soft constraints are counted. The goal
//! decides what a leaf (or, in partial mode, any node) is worth.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::{ValHeuristic, VarHeuristic};
use crate::model::{Assignment, Constraint, Value, Var, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Goal {
    /// First complete assignment satisfying the hard constraints.
    Satisfy,
    /// Complete assignment maximizing the number of violated soft constraints.
    Maximize,
    /// Like `Maximize`, but every node is a candidate and a wiped-out
    /// variable is dropped from the assignment instead of failing.
    MaximizePartial,
    /// Complete assignment violating some but not all soft constraints.
    Discriminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Soft {
    Open,
    Violated,
    /// Satisfied, or can no longer be violated under the live domains.
    Dead,
}

enum Undo {
    Size(Var, u32),
    Soft(u32, Soft),
    Excluded(Var),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Deadlines {
    pub cut_min: Option<Instant>,
    pub cut_max: Instant,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub best: Option<Assignment>,
    pub best_violated: usize,
    pub hit_cut_min: bool,
    pub hit_cut_max: bool,
}

impl Outcome {
    /// The search ran to its natural end, so `best` is final (optimal, or proof of absence).
    pub fn complete(&self) -> bool {
        !self.hit_cut_min && !self.hit_cut_max
    }
}

pub(crate) struct Engine<'a> {
    goal: Goal,
    var_h: VarHeuristic,
    val_h: ValHeuristic,
    active: Vec<Var>,
    priority: Vec<Var>,
    values: Vec<&'a [Value]>,
    perm: Vec<Vec<u32>>,
    size: Vec<u32>,
    excluded: Vec<bool>,
    assign: Assignment,
    hard: Vec<&'a Constraint>,
    hard_w: Vec<usize>,
    hard_of: Vec<Vec<u32>>,
    weights: &'a mut [u32],
    soft: Vec<&'a Constraint>,
    soft_of: Vec<Vec<u32>>,
    soft_deg: Vec<usize>,
    soft_state: Vec<Soft>,
    violated: usize,
    dead: usize,
    trail: Vec<Undo>,
    rng: &'a mut ChaCha8Rng,
    deadlines: Deadlines,
    best: Option<Assignment>,
    best_violated: usize,
    hit_cut_min: bool,
    hit_cut_max: bool,
}

impl<'a> Engine<'a> {
    /// `hard[i]` is weighted by `weights[i]`; constraints whose scope leaves
    /// `active` are ignored.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        vocab: &'a Vocabulary,
        active: &[Var],
        hard: &'a [Constraint],
        soft: Vec<&'a Constraint>,
        goal: Goal,
        var_h: VarHeuristic,
        val_h: ValHeuristic,
        weights: &'a mut [u32],
        rng: &'a mut ChaCha8Rng,
        deadlines: Deadlines,
    ) -> Self {
        debug_assert_eq!(hard.len(), weights.len());
        let n = vocab.len();
        let mut in_active = vec![false; n];
        for &v in active {
            in_active[v] = true;
        }
        let inside = |c: &Constraint| c.scope().iter().all(|&v| in_active[v]);

        let mut hard_kept = Vec::new();
        let mut hard_w = Vec::new();
        let mut hard_of = vec![Vec::new(); n];
        for (i, c) in hard.iter().enumerate().filter(|(_, c)| inside(c)) {
            for &v in c.scope() {
                hard_of[v].push(hard_kept.len() as u32);
            }
            hard_kept.push(c);
            hard_w.push(i);
        }
        let soft: Vec<&Constraint> = soft.into_iter().filter(|c| inside(c)).collect();
        let mut soft_of = vec![Vec::new(); n];
        for (i, c) in soft.iter().enumerate() {
            for &v in c.scope() {
                soft_of[v].push(i as u32);
            }
        }
        let soft_deg = soft_of.iter().map(Vec::len).collect();
        let values: Vec<&[Value]> = (0..n).map(|v| vocab.domain(v)).collect();
        let mut active = active.to_vec();
        active.sort_unstable();
        active.dedup();
        Engine {
            goal,
            var_h,
            val_h,
            active,
            priority: Vec::new(),
            perm: values.iter().map(|d| (0..d.len() as u32).collect()).collect(),
            size: values.iter().map(|d| d.len() as u32).collect(),
            values,
            excluded: vec![false; n],
            assign: Assignment::empty(n),
            hard: hard_kept,
            hard_w,
            hard_of,
            weights,
            soft_state: vec![Soft::Open; soft.len()],
            soft,
            soft_of,
            soft_deg,
            violated: 0,
            dead: 0,
            trail: Vec::new(),
            rng,
            deadlines,
            best: None,
            best_violated: 0,
            hit_cut_min: false,
            hit_cut_max: false,
        }
    }

    /// Variables to branch on first, in this order.
    pub fn with_priority(mut self, vars: &[Var]) -> Self {
        self.priority = vars.to_vec();
        self
    }

    pub fn run(mut self) -> Outcome {
        self.dfs();
        Outcome {
            best: self.best,
            best_violated: self.best_violated,
            hit_cut_min: self.hit_cut_min,
            hit_cut_max: self.hit_cut_max,
        }
    }

    /// Returns true when the whole search should stop.
    fn dfs(&mut self) -> bool {
        let now = Instant::now();
        if now >= self.deadlines.cut_max {
            self.hit_cut_max = true;
            return true;
        }
        if let Some(cut_min) = self.deadlines.cut_min {
            if self.best_violated >= 1 && now >= cut_min {
                self.hit_cut_min = true;
                return true;
            }
        }
        let live = self.soft.len() - self.dead;
        match self.goal {
            Goal::Maximize | Goal::MaximizePartial if live <= self.best_violated => return false,
            Goal::Discriminate if live == 0 || self.violated == self.soft.len() => return false,
            _ => {}
        }
        if self.goal == Goal::MaximizePartial && self.violated > self.best_violated {
            self.record();
            if self.best_violated == self.soft.len() {
                return true;
            }
        }
        let Some(x) = self.pick_var() else {
            return self.leaf();
        };
        for w in self.order_values(x) {
            let mark = self.trail.len();
            self.assign.set(x, w);
            let stop = self.propagate(x) && self.dfs();
            self.undo(mark);
            self.assign.unset(x);
            if stop {
                return true;
            }
        }
        false
    }

    fn leaf(&mut self) -> bool {
        match self.goal {
            Goal::Satisfy => {
                self.record();
                true
            }
            Goal::Maximize | Goal::MaximizePartial => {
                if self.violated > self.best_violated {
                    self.record();
                }
                self.best_violated == self.soft.len()
            }
            Goal::Discriminate => {
                if self.violated > 0 && self.violated < self.soft.len() {
                    self.record();
                    return true;
                }
                false
            }
        }
    }

    fn record(&mut self) {
        self.best = Some(self.assign.clone());
        self.best_violated = self.violated;
    }

    fn free(&self, v: Var) -> bool {
        self.assign.get(v).is_none() && !self.excluded[v] && self.size[v] > 0
    }

    fn pick_var(&self) -> Option<Var> {
        if let Some(&p) = self.priority.iter().find(|&&p| self.free(p)) {
            return Some(p);
        }
        let mut candidates = self.active.iter().copied().filter(|&v| self.free(v));
        let first = candidates.next()?;
        let better = |a: Var, b: Var| -> bool {
            match self.var_h {
                VarHeuristic::Lex => false,
                VarHeuristic::Dom => self.size[a] < self.size[b],
                VarHeuristic::Bdeg => self.soft_deg[a] > self.soft_deg[b],
                VarHeuristic::DomWdeg => {
                    let (wa, wb) = (self.wdeg(a).max(1), self.wdeg(b).max(1));
                    u64::from(self.size[a]) * wb < u64::from(self.size[b]) * wa
                }
            }
        };
        Some(candidates.fold(first, |best, v| if better(v, best) { v } else { best }))
    }

    /// Weighted degree over hard constraints that still have another free variable.
    fn wdeg(&self, v: Var) -> u64 {
        self.hard_of[v]
            .iter()
            .filter(|&&ci| self.hard[ci as usize].scope().iter().any(|&u| u != v && self.free(u)))
            .map(|&ci| u64::from(self.weights[self.hard_w[ci as usize]]))
            .sum()
    }

    fn live_values(&self, v: Var) -> impl Iterator<Item = Value> + '_ {
        self.perm[v][..self.size[v] as usize].iter().map(move |&i| self.values[v][i as usize])
    }

    fn order_values(&mut self, x: Var) -> Vec<Value> {
        let mut vals: Vec<Value> = self.live_values(x).collect();
        vals.sort_unstable();
        match self.val_h {
            ValHeuristic::Lex => {}
            ValHeuristic::Random => vals.shuffle(self.rng),
            ValHeuristic::MaxV => {
                let mut scored: Vec<(usize, Value)> = vals.iter().map(|&w| (self.conflicts(x, w), w)).collect();
                scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                vals = scored.into_iter().map(|(_, w)| w).collect();
            }
        }
        vals
    }

    /// Open soft constraints on `x` whose other variables are assigned and
    /// which `x = w` would violate.
    fn conflicts(&self, x: Var, w: Value) -> usize {
        self.soft_of[x]
            .iter()
            .filter(|&&si| {
                let c = self.soft[si as usize];
                self.soft_state[si as usize] == Soft::Open
                    && c.scope().iter().all(|&u| u == x || self.assign.get(u).is_some())
                    && !holds_with(c, &self.assign, x, w)
            })
            .count()
    }

    /// Number of unassigned scope variables and the last of them.
    fn open_vars(&self, c: &Constraint) -> (usize, Option<Var>) {
        let mut count = 0;
        let mut last = None;
        for &u in c.scope() {
            if self.assign.get(u).is_none() {
                count += 1;
                last = Some(u);
            }
        }
        (count, last)
    }

    fn propagate(&mut self, x: Var) -> bool {
        let hard_ids = std::mem::take(&mut self.hard_of[x]);
        let mut ok = true;
        for &ci in &hard_ids {
            let c = self.hard[ci as usize];
            match self.open_vars(c) {
                (0, _) => {
                    if !c.holds(&scope_values(c, &self.assign)) {
                        ok = false;
                        break;
                    }
                }
                (1, Some(u)) if !self.excluded[u] => {
                    self.filter(u, |w, assign| holds_with(c, assign, u, w));
                    if self.size[u] == 0 {
                        self.weights[self.hard_w[ci as usize]] += 1;
                        if self.goal == Goal::MaximizePartial {
                            self.exclude(u);
                        } else {
                            ok = false;
                            break;
                        }
                    }
                }
                _ => {}
            }
        }
        self.hard_of[x] = hard_ids;
        if !ok {
            return false;
        }

        let soft_ids = std::mem::take(&mut self.soft_of[x]);
        for &si in &soft_ids {
            if self.soft_state[si as usize] != Soft::Open {
                continue;
            }
            let c = self.soft[si as usize];
            match self.open_vars(c) {
                (0, _) => {
                    let next = if c.holds(&scope_values(c, &self.assign)) { Soft::Dead } else { Soft::Violated };
                    self.set_soft(si, next);
                }
                (1, Some(u)) => {
                    let violable = !self.excluded[u]
                        && self.live_values(u).any(|w| !holds_with(c, &self.assign, u, w));
                    if !violable {
                        self.set_soft(si, Soft::Dead);
                    }
                }
                _ => {}
            }
        }
        self.soft_of[x] = soft_ids;
        true
    }

    fn filter(&mut self, u: Var, keep: impl Fn(Value, &Assignment) -> bool) {
        let old = self.size[u];
        let mut size = old as usize;
        let mut i = 0;
        while i < size {
            let w = self.values[u][self.perm[u][i] as usize];
            if keep(w, &self.assign) {
                i += 1;
            } else {
                size -= 1;
                self.perm[u].swap(i, size);
            }
        }
        if size as u32 != old {
            self.trail.push(Undo::Size(u, old));
            self.size[u] = size as u32;
        }
    }

    fn exclude(&mut self, u: Var) {
        self.excluded[u] = true;
        self.trail.push(Undo::Excluded(u));
        let soft_ids = std::mem::take(&mut self.soft_of[u]);
        for &si in &soft_ids {
            if self.soft_state[si as usize] == Soft::Open {
                self.set_soft(si, Soft::Dead);
            }
        }
        self.soft_of[u] = soft_ids;
    }

    fn set_soft(&mut self, si: u32, next: Soft) {
        let prev = self.soft_state[si as usize];
        self.trail.push(Undo::Soft(si, prev));
        self.bump(prev, false);
        self.bump(next, true);
        self.soft_state[si as usize] = next;
    }

    fn bump(&mut self, state: Soft, up: bool) {
        let counter = match state {
            Soft::Open => return,
            Soft::Violated => &mut self.violated,
            Soft::Dead => &mut self.dead,
        };
        if up {
            *counter += 1;
        } else {
            *counter -= 1;
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail above mark") {
                Undo::Size(v, s) => self.size[v] = s,
                Undo::Excluded(v) => self.excluded[v] = false,
                Undo::Soft(si, prev) => {
                    let cur = self.soft_state[si as usize];
                    self.bump(cur, false);
                    self.bump(prev, true);
                    self.soft_state[si as usize] = prev;
                }
            }
        }
    }
}

fn scope_values(c: &Constraint, e: &Assignment) -> smallvec::SmallVec<[Value; 4]> {
    c.scope().iter().map(|&v| e.get(v).expect("scope assigned")).collect()
}

/// Whether `c` holds when `u` takes `w` and the rest of its scope is read from `e`.
fn holds_with(c: &Constraint, e: &Assignment, u: Var, w: Value) -> bool {
    let vals: smallvec::SmallVec<[Value; 4]> = c
        .scope()
        .iter()
        .map(|&v| if v == u { w } else { e.get(v).expect("other scope variables assigned") })
        .collect();
    c.holds(&vals)
}
