use super::trace::{CallReturn, Routine};
use super::{Acquirer, Step};
use crate::model::{Assignment, VarSet};
use crate::oracle::{Oracle, QuerySite};

impl<O: Oracle> Acquirer<'_, O> {
    /// Finds the scope of a target constraint violated by `e` inside `R ∪ Y`,
    /// assuming `e_{R ∪ Y}` is negative. Positive answers prune the bias.
    pub fn find_scope(&mut self, e: &Assignment, r: &VarSet, y: &VarSet, ask_query: bool) -> Step<VarSet> {
        self.tracer.enter(Routine::FindScope, r.to_vec(), y.to_vec(), Vec::new());
        let out = self.find_scope_inner(e, r, y, ask_query);
        if let Ok(s) = &out {
            self.tracer.exit(CallReturn::Scope(s.to_vec()));
        }
        out
    }

    fn find_scope_inner(&mut self, e: &Assignment, r: &VarSet, y: &VarSet, ask_query: bool) -> Step<VarSet> {
        if ask_query && !r.is_empty() {
            let e_r = e.project(r);
            if self.ask(&e_r, QuerySite::FindScope)? {
                self.bias.remove_violated(&e_r);
            } else {
                return Ok(VarSet::empty(y.capacity()));
            }
        }
        if y.len() <= 1 {
            return Ok(y.clone());
        }
        let (y1, y2) = y.split_half();
        let s1 = self.find_scope(e, &r.union(&y1), &y2, true)?;
        let s2 = self.find_scope(e, &r.union(&s1), &y1, !s1.is_empty())?;
        Ok(s1.union(&s2))
    }

    /// FindScope that skips queries whose answer is already known: no bias
    /// constraint is violated (positive), or as many are violated as in the
    /// last negative query (negative). The caller sets `rej` first.
    pub fn find_scope2(&mut self, e: &Assignment, r: &VarSet, y: &VarSet, ask_query: bool) -> Step<VarSet> {
        self.tracer.enter(Routine::FindScope2, r.to_vec(), y.to_vec(), Vec::new());
        let out = self.find_scope2_inner(e, r, y, ask_query);
        if let Ok(s) = &out {
            self.tracer.exit(CallReturn::Scope(s.to_vec()));
        }
        out
    }

    fn find_scope2_inner(&mut self, e: &Assignment, r: &VarSet, y: &VarSet, ask_query: bool) -> Step<VarSet> {
        if ask_query {
            let e_r = e.project(r);
            let kappa = self.kappa_all(&e_r);
            if kappa > 0 {
                if self.rej == Some(kappa) {
                    return Ok(VarSet::empty(y.capacity()));
                }
                if self.ask(&e_r, QuerySite::FindScope2)? {
                    self.bias.remove_violated(&e_r);
                } else {
                    self.rej = Some(kappa);
                    return Ok(VarSet::empty(y.capacity()));
                }
            }
        }
        if y.len() <= 1 {
            return Ok(y.clone());
        }
        let (y1, y2) = y.split_half();
        let s1 = self.find_scope2(e, &r.union(&y1), &y2, true)?;
        let s2 = self.find_scope2(e, &r.union(&s1), &y1, !s1.is_empty())?;
        Ok(s1.union(&s2))
    }
}
