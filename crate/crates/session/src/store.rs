use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use acqlab_core::benchmarks::{self, Params};
use acqlab_core::model::Instance;

use crate::protocol::{AnswerMode, CreateRequest};
use crate::session::Session;
use crate::SessionError;

/// All live sessions, keyed by id.
pub struct Store {
    sessions: Mutex<HashMap<String, Arc<Session>>>,
    pub idle_timeout: Duration,
}

impl Default for Store {
    fn default() -> Self {
        Store::new(Duration::from_secs(30 * 60))
    }
}

impl Store {
    pub fn new(idle_timeout: Duration) -> Self {
        Store { sessions: Mutex::new(HashMap::new()), idle_timeout }
    }

    pub fn create(&self, req: CreateRequest) -> Result<Arc<Session>, SessionError> {
        let instance = match (req.instance, req.benchmark) {
            (Some(file), None) => Instance::from_file(&file).map_err(|e| SessionError::InvalidInstance(e.to_string()))?,
            (None, Some(b)) => {
                let params = Params { size: b.size, seed: b.seed, extra_relations: b.extra_relations };
                benchmarks::build(&b.name, &params).map_err(|e| SessionError::InvalidInstance(e.to_string()))?
            }
            _ => return Err(SessionError::InvalidInstance("give exactly one of `instance` and `benchmark`".into())),
        };
        let mode = req.answers.unwrap_or(if instance.target.is_some() { AnswerMode::Simulated } else { AnswerMode::Human });
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::start(id.clone(), instance, req.config, mode, req.script)?;
        self.lock().insert(id, Arc::clone(&session));
        Ok(session)
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<String, Arc<Session>>> {
        self.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn get(&self, id: &str) -> Result<Arc<Session>, SessionError> {
        let s = self.lock().get(id).cloned().ok_or_else(|| SessionError::UnknownSession(id.to_string()))?;
        s.touch();
        Ok(s)
    }

    /// Aborts and forgets a session.
    pub fn remove(&self, id: &str) -> Result<Arc<Session>, SessionError> {
        let s = self.lock().remove(id).ok_or_else(|| SessionError::UnknownSession(id.to_string()))?;
        s.abort();
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Aborts and drops sessions untouched for longer than the idle timeout.
    pub fn evict_idle(&self, now: Instant) -> Vec<String> {
        let mut map = self.lock();
        let stale: Vec<String> =
            map.iter().filter(|(_, s)| s.idle_for(now) > self.idle_timeout).map(|(id, _)| id.clone()).collect();
        for id in &stale {
            if let Some(s) = map.remove(id) {
                s.abort();
            }
        }
        stale
    }
}
