use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;

use super::trace::{CallReturn, Routine};
use super::{Acquirer, Status, Step};
use crate::model::{Assignment, Var, VarSet};
use crate::oracle::{Oracle, QuerySite};

/// Per-example state of a FindAllScopes search.
struct Sweep {
    // removal order; members of Y are dropped one at a time in this order
    order: Vec<Var>,
    memo: HashMap<VarSet, bool>,
    started: Instant,
    cutoff: Option<Duration>,
    cut: bool,
    depth: usize,
}

impl Sweep {
    fn new(order: Vec<Var>, cutoff: Option<Duration>) -> Self {
        Sweep { order, memo: HashMap::new(), started: Instant::now(), cutoff, cut: false, depth: 0 }
    }
}

impl<O: Oracle> Acquirer<'_, O> {
    pub(super) fn multiacq(&mut self) -> Step<Status> {
        let n = self.vocab.len();
        let mut order: Vec<Var> = (0..n).rev().collect();
        let cutoff = Some(self.config.restart_cutoff);
        loop {
            if !self.learned_satisfiable() {
                return Ok(Status::Collapse);
            }
            let e = match self.generate() {
                Ok(e) => e,
                Err(status) => return Ok(status),
            };
            let y = e.assigned();
            let mut mses = Vec::new();
            let mut sweep = Sweep::new(order.clone(), cutoff);
            self.sweep(&e, &y, &mut mses, &mut sweep)?;
            if sweep.cut {
                let reversed: Vec<Var> = order.iter().rev().copied().collect();
                let mut again = Sweep::new(reversed, cutoff);
                self.sweep(&e, &y, &mut mses, &mut again)?;
                if again.cut {
                    order.shuffle(&mut self.rng);
                }
            }
            for scope in mses {
                self.record_scope(&e, &scope);
                match self.find_c(&e, &scope)? {
                    Some(found) => self.accept(found),
                    None => return Ok(Status::Collapse),
                }
            }
        }
    }

    /// Adds to `mses` every minimal scope inside `Y` and reports whether
    /// `e_Y` contains one. Drops variables in descending index order.
    pub fn find_all_scopes(&mut self, e: &Assignment, y: &VarSet, mses: &mut Vec<VarSet>) -> Step<bool> {
        let order: Vec<Var> = (0..self.vocab.len()).rev().collect();
        let mut sweep = Sweep::new(order, None);
        self.sweep(e, y, mses, &mut sweep)
    }

    fn sweep(&mut self, e: &Assignment, y: &VarSet, mses: &mut Vec<VarSet>, st: &mut Sweep) -> Step<bool> {
        self.tracer.enter(Routine::FindAllScopes, Vec::new(), y.to_vec(), Vec::new());
        let out = self.sweep_inner(e, y, mses, st);
        if let Ok(flag) = out {
            if self.tracer.enabled() {
                self.tracer.set_scopes(mses.iter().map(VarSet::to_vec).collect());
            }
            self.tracer.exit(CallReturn::Flag(flag));
        }
        out
    }

    fn sweep_inner(&mut self, e: &Assignment, y: &VarSet, mses: &mut Vec<VarSet>, st: &mut Sweep) -> Step<bool> {
        if mses.contains(y) {
            return Ok(true);
        }
        if let Some(&known) = st.memo.get(y) {
            return Ok(known);
        }
        if st.cut {
            return Ok(false);
        }
        if let Some(limit) = st.cutoff {
            // only once at least one scope is in hand
            if !mses.is_empty() && st.started.elapsed() >= limit {
                st.cut = true;
                return Ok(false);
            }
        }
        let e_y = e.project(y);
        if self.kappa_all(&e_y) == 0 {
            st.memo.insert(y.clone(), false);
            return Ok(false);
        }
        if !mses.iter().any(|m| m.is_strict_subset(y)) {
            let site = if st.depth == 0 { QuerySite::Main } else { QuerySite::FindAllScopes };
            if self.ask(&e_y, site)? {
                self.bias.remove_violated(&e_y);
                st.memo.insert(y.clone(), false);
                return Ok(false);
            }
        }
        let mut flag = false;
        let members: Vec<Var> = st.order.iter().copied().filter(|&v| y.contains(v)).collect();
        st.depth += 1;
        for x in members {
            let child = y.without(x);
            let found = self.sweep(e, &child, mses, st);
            match found {
                Ok(f) => flag |= f,
                Err(err) => {
                    st.depth -= 1;
                    return Err(err);
                }
            }
        }
        st.depth -= 1;
        // a cut child may have returned false without looking
        if !flag && !st.cut {
            mses.push(y.clone());
        }
        let result = flag || !st.cut;
        if !st.cut {
            st.memo.insert(y.clone(), result);
        }
        Ok(result)
    }
}
