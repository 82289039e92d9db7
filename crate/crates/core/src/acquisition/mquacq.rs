use super::trace::{CallReturn, Routine};
use super::{Acquirer, Status, Step};
use crate::model::{Assignment, VarSet};
use crate::oracle::{Oracle, QuerySite};

fn push_new(into: &mut Vec<VarSet>, from: impl IntoIterator<Item = VarSet>) {
    for s in from {
        if !into.contains(&s) {
            into.push(s);
        }
    }
}

impl<O: Oracle> Acquirer<'_, O> {
    pub(super) fn mquacq(&mut self) -> Step<Status> {
        self.collapse = false;
        loop {
            if !self.learned_satisfiable() {
                return Ok(Status::Collapse);
            }
            let e = match self.generate() {
                Ok(e) => e,
                Err(status) => return Ok(status),
            };
            self.find_all_cons(&e, &e.assigned(), &[])?;
            if self.collapse {
                return Ok(Status::Collapse);
            }
        }
    }

    /// Learns every target constraint violated by `e_Y` whose scope is not
    /// in `scopes`, and returns the scopes learned. Sets the collapse flag
    /// when FindC comes back empty.
    pub fn find_all_cons(&mut self, e: &Assignment, y: &VarSet, scopes: &[VarSet]) -> Step<Vec<VarSet>> {
        self.fac(e, y, scopes, 0)
    }

    fn fac(&mut self, e: &Assignment, y: &VarSet, scopes: &[VarSet], depth: usize) -> Step<Vec<VarSet>> {
        self.tracer.enter(Routine::FindAllCons, Vec::new(), y.to_vec(), scopes.iter().map(VarSet::to_vec).collect());
        let out = self.find_all_cons_body(e, y, scopes, depth);
        if let Ok(ns) = &out {
            self.tracer.exit(CallReturn::Scopes(ns.iter().map(VarSet::to_vec).collect()));
        }
        out
    }

    fn find_all_cons_body(&mut self, e: &Assignment, y: &VarSet, scopes: &[VarSet], depth: usize) -> Step<Vec<VarSet>> {
        if self.collapse {
            return Ok(Vec::new());
        }
        let e_y = e.project(y);
        let n = self.vocab.len();
        let fresh = self.bias.kappa(&e_y).iter().any(|c| {
            let s = c.scope_set(n);
            !scopes.contains(&s)
        });
        if !fresh {
            return Ok(Vec::new());
        }
        let mut nscopes: Vec<VarSet> = Vec::new();
        if let Some(picked) = scopes.first() {
            let rest: Vec<VarSet> = scopes[1..].to_vec();
            for x in picked.iter() {
                let mut passed = rest.clone();
                push_new(&mut passed, nscopes.iter().cloned());
                let found = self.fac(e, &y.without(x), &passed, depth + 1)?;
                push_new(&mut nscopes, found);
            }
        } else {
            let site = if depth == 0 { QuerySite::Main } else { QuerySite::FindAllCons };
            if self.ask(&e_y, site)? {
                self.bias.remove_violated(&e_y);
            } else {
                let scope = self.find_scope_top(e, y)?;
                match self.find_c(e, &scope)? {
                    None => {
                        self.collapse = true;
                        return Ok(Vec::new());
                    }
                    Some(found) => self.accept(found),
                }
                push_new(&mut nscopes, [scope]);
                let found = self.fac(e, y, &nscopes.clone(), depth + 1)?;
                push_new(&mut nscopes, found);
            }
        }
        Ok(nscopes)
    }
}
