use std::collections::HashMap;

use crate::model::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Routine {
    FindScope,
    FindScope2,
    FindC,
    FindAllScopes,
    FindAllCons,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CallReturn {
    Scope(Vec<Var>),
    Flag(bool),
    Scopes(Vec<Vec<Var>>),
    Constraint(Option<String>),
}

/// One recursive call. Labels number the calls of one routine the way a
/// printed call tree does: the first call is `0`, its children `1`, `2`, and
/// their children `1.1`, `1.2`, ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallRecord {
    pub routine: Routine,
    pub label: String,
    /// `R` for the FindScope variants.
    pub r: Vec<Var>,
    pub y: Vec<Var>,
    /// `Scopes` for FindAllCons, `MSes` on exit for FindAllScopes.
    pub scopes: Vec<Vec<Var>>,
    pub asked: Option<bool>,
    pub returned: Option<CallReturn>,
}

#[derive(Debug, Default)]
struct Frames {
    counters: Vec<usize>,
    path: Vec<usize>,
}

#[derive(Debug, Default)]
pub(crate) struct Tracer {
    enabled: bool,
    records: Vec<CallRecord>,
    frames: HashMap<Routine, Frames>,
    active: Vec<usize>,
}

impl Tracer {
    pub fn new(enabled: bool) -> Self {
        Tracer { enabled, ..Default::default() }
    }

    pub fn records(&self) -> &[CallRecord] {
        &self.records
    }

    pub fn clear(&mut self) {
        self.records.clear();
        self.frames.clear();
        self.active.clear();
    }

    pub fn enter(&mut self, routine: Routine, r: Vec<Var>, y: Vec<Var>, scopes: Vec<Vec<Var>>) {
        if !self.enabled {
            return;
        }
        let f = self.frames.entry(routine).or_default();
        if let Some(last) = f.counters.last_mut() {
            *last += 1;
            f.path.push(*last);
        }
        f.counters.push(0);
        let label = if f.path.is_empty() {
            "0".to_string()
        } else {
            f.path.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(".")
        };
        self.active.push(self.records.len());
        self.records.push(CallRecord { routine, label, r, y, scopes, asked: None, returned: None });
    }

    pub fn answer(&mut self, answer: bool) {
        if let Some(&i) = self.active.last() {
            self.records[i].asked = Some(answer);
        }
    }

    pub fn set_scopes(&mut self, scopes: Vec<Vec<Var>>) {
        if let Some(&i) = self.active.last() {
            self.records[i].scopes = scopes;
        }
    }

    pub fn exit(&mut self, returned: CallReturn) {
        if !self.enabled {
            return;
        }
        let i = self.active.pop().expect("unbalanced trace");
        let routine = self.records[i].routine;
        self.records[i].returned = Some(returned);
        let f = self.frames.get_mut(&routine).expect("frame");
        f.counters.pop();
        f.path.pop();
    }

    pub fn enabled(&self) -> bool {
        self.enabled
    }
}
