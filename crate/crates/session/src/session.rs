//! One acquisition run driven through the session protocol.
//!
//! The learner runs on its own thread. When it needs an answer from a person
//! it parks the query in the session state and blocks on a one-slot channel
//! until `answer` (or `abort`) fills it.

use std::collections::VecDeque;
use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use tokio::sync::watch;

use acqlab_core::acquisition::{self, AcquisitionConfig, AcquisitionError, Metrics, Status};
use acqlab_core::model::{Assignment, Constraint, Instance};
use acqlab_core::oracle::{Oracle, OracleError, Progress, QueryRecord, SimulatedOracle};

use crate::protocol::{
    AnswerMode, AnsweredBy, Classification, ConfigSpec, InstanceInfo, PendingQuery, Phase, Snapshot, Transcript,
    TranscriptEntry,
};
use crate::SessionError;

struct State {
    phase: Phase,
    pending: Option<PendingQuery>,
    posted_at: Option<Instant>,
    answer_tx: Option<SyncSender<bool>>,
    entries: Vec<TranscriptEntry>,
    learned: Vec<Constraint>,
    bias_remaining: usize,
    metrics: Option<Metrics>,
    log: Option<Vec<QueryRecord>>,
    error: Option<String>,
    last_access: Instant,
}

pub struct Session {
    id: String,
    instance: Instance,
    spec: ConfigSpec,
    config: AcquisitionConfig,
    mode: AnswerMode,
    state: Mutex<State>,
    changes: watch::Sender<u64>,
}

impl Session {
    /// Starts the learner thread and returns the running session.
    pub fn start(
        id: String,
        instance: Instance,
        spec: ConfigSpec,
        mode: AnswerMode,
        script: Option<Vec<Classification>>,
    ) -> Result<Arc<Session>, SessionError> {
        let config = spec.to_config().map_err(SessionError::InvalidInstance)?;
        let needs_target = matches!(mode, AnswerMode::Simulated | AnswerMode::Hybrid);
        if needs_target && instance.target.is_none() {
            return Err(SessionError::InvalidInstance(format!("{mode:?} answers need an instance with a target")));
        }
        if (mode == AnswerMode::Scripted) != script.is_some() {
            return Err(SessionError::InvalidInstance("a script goes with, and only with, scripted answers".into()));
        }
        let (tx, rx) = sync_channel(1);
        let session = Arc::new(Session {
            id,
            spec,
            config,
            mode,
            state: Mutex::new(State {
                phase: Phase::Generating,
                pending: None,
                posted_at: None,
                answer_tx: Some(tx),
                entries: Vec::new(),
                learned: Vec::new(),
                bias_remaining: instance.bias.len(),
                metrics: None,
                log: None,
                error: None,
                last_access: Instant::now(),
            }),
            instance,
            changes: watch::channel(0).0,
        });
        let source = match mode {
            AnswerMode::Human => Answers::Person { rx, hint: None },
            AnswerMode::Hybrid => Answers::Person { rx, hint: Some(session.simulated()) },
            AnswerMode::Simulated => Answers::Target(session.simulated()),
            AnswerMode::Scripted => Answers::Script(script.unwrap_or_default().into()),
        };
        let oracle = SessionOracle { session: Arc::clone(&session), answers: source };
        let worker = Arc::clone(&session);
        std::thread::Builder::new()
            .name(format!("acq-{}", session.id))
            .spawn(move || worker.finish(acquisition::run(&worker.instance, oracle, worker.config.clone())))
            .map_err(|e| SessionError::Internal(e.to_string()))?;
        Ok(session)
    }

    fn simulated(&self) -> SimulatedOracle {
        SimulatedOracle::new(self.instance.target().to_vec())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn notify(&self) {
        self.changes.send_modify(|v| *v += 1);
    }

    pub fn touch(&self) {
        self.lock().last_access = Instant::now();
    }

    pub fn idle_for(&self, now: Instant) -> Duration {
        now.saturating_duration_since(self.lock().last_access)
    }

    pub fn phase(&self) -> Phase {
        self.lock().phase
    }

    pub fn snapshot(&self) -> Snapshot {
        let s = self.lock();
        Snapshot {
            id: self.id.clone(),
            phase: s.phase,
            answers: self.mode,
            instance: InstanceInfo {
                name: self.instance.name.clone(),
                variables: self.instance.n_vars(),
                bias: self.instance.bias.len(),
                has_target: self.instance.target.is_some(),
            },
            pending: s.pending.clone(),
            queries: s.entries.len(),
            learned: s.learned.iter().map(ToString::to_string).collect(),
            bias_remaining: s.bias_remaining,
            metrics: s.metrics.clone(),
            error: s.error.clone(),
        }
    }

    pub fn transcript(&self) -> Transcript {
        let s = self.lock();
        Transcript {
            id: self.id.clone(),
            phase: s.phase,
            instance: self.instance.to_file(),
            config: self.spec.clone(),
            answers: self.mode,
            entries: s.entries.clone(),
            learned: s.learned.iter().map(ToString::to_string).collect(),
            log: s.log.clone(),
        }
    }

    /// Hands a person's answer to the waiting learner.
    pub fn answer(&self, c: Classification, index: Option<usize>) -> Result<(), SessionError> {
        let mut s = self.lock();
        if s.phase != Phase::AwaitingAnswer || !matches!(self.mode, AnswerMode::Human | AnswerMode::Hybrid) {
            return Err(SessionError::WrongPhase(s.phase));
        }
        if index.is_some_and(|i| s.pending.as_ref().is_some_and(|p| p.index != i)) {
            return Err(SessionError::WrongPhase(s.phase));
        }
        let tx = s.answer_tx.as_ref().ok_or(SessionError::WrongPhase(s.phase))?;
        // the slot is empty: the learner consumed the previous answer before posting this query
        tx.try_send(c.positive()).map_err(|_| SessionError::WrongPhase(s.phase))?;
        s.phase = Phase::Generating;
        s.pending = None;
        drop(s);
        self.notify();
        Ok(())
    }

    /// Stops the learner; a finished session keeps its terminal phase.
    pub fn abort(&self) {
        let mut s = self.lock();
        s.answer_tx = None;
        if !s.phase.is_terminal() {
            s.phase = Phase::Aborted;
            s.pending = None;
        }
        drop(s);
        self.notify();
    }

    /// Waits until the session leaves `Generating` or `timeout` passes.
    pub async fn settle(&self, timeout: Duration) -> Snapshot {
        let mut rx = self.changes.subscribe();
        let deadline = tokio::time::Instant::now() + timeout;
        while self.phase() == Phase::Generating {
            if tokio::time::timeout_at(deadline, rx.changed()).await.is_err() {
                break;
            }
        }
        self.snapshot()
    }

    fn post(&self, e: &Assignment, suggestion: Option<Classification>) -> Result<(), OracleError> {
        let mut s = self.lock();
        if s.phase == Phase::Aborted {
            return Err(OracleError::Aborted);
        }
        s.pending = Some(PendingQuery {
            index: s.entries.len(),
            values: e.values().to_vec(),
            assigned: e.assigned_count(),
            suggestion,
        });
        s.posted_at = Some(Instant::now());
        s.phase = Phase::AwaitingAnswer;
        drop(s);
        self.notify();
        Ok(())
    }

    fn record(&self, e: &Assignment, positive: bool, by: AnsweredBy) -> Result<(), OracleError> {
        let mut s = self.lock();
        if s.phase == Phase::Aborted {
            return Err(OracleError::Aborted);
        }
        let think = s.posted_at.take().map_or(0.0, |t| t.elapsed().as_secs_f64());
        let index = s.entries.len();
        s.entries.push(TranscriptEntry {
            index,
            values: e.values().to_vec(),
            answer: Classification::from_bool(positive),
            answered_by: by,
            think_secs: think,
        });
        s.pending = None;
        s.phase = Phase::Generating;
        Ok(())
    }

    fn progress(&self, p: &Progress<'_>) {
        let mut s = self.lock();
        s.learned = p.learned.to_vec();
        s.bias_remaining = p.bias_size;
    }

    fn finish(&self, result: Result<acquisition::AcquisitionOutcome, AcquisitionError>) {
        let mut s = self.lock();
        s.pending = None;
        s.answer_tx = None;
        match result {
            Ok(out) => {
                if s.phase != Phase::Aborted {
                    s.phase = match out.status {
                        Status::Converged => Phase::Converged,
                        Status::PrematureConvergence => Phase::PrematureConvergence,
                        Status::Collapse => Phase::Collapsed,
                    };
                }
                s.learned = out.learned.to_vec();
                s.bias_remaining = out.bias.len();
                s.metrics = Some(out.metrics);
                s.log = Some(out.log.records().to_vec());
            }
            Err(AcquisitionError::Oracle(_)) => s.phase = Phase::Aborted,
            Err(e) => {
                s.phase = Phase::Aborted;
                s.error = Some(e.to_string());
            }
        }
        drop(s);
        self.notify();
    }
}

enum Answers {
    Person { rx: Receiver<bool>, hint: Option<SimulatedOracle> },
    Target(SimulatedOracle),
    Script(VecDeque<Classification>),
}

struct SessionOracle {
    session: Arc<Session>,
    answers: Answers,
}

impl Oracle for SessionOracle {
    fn ask(&mut self, e: &Assignment) -> Result<bool, OracleError> {
        let (answer, by) = match &mut self.answers {
            Answers::Person { rx, hint } => {
                let suggestion = hint.as_ref().map(|o| Classification::from_bool(o.classify(e)));
                self.session.post(e, suggestion)?;
                (rx.recv().map_err(|_| OracleError::Aborted)?, AnsweredBy::Human)
            }
            Answers::Target(o) => (o.classify(e), AnsweredBy::Simulated),
            Answers::Script(script) => {
                let next = script.pop_front().ok_or(OracleError::Aborted)?;
                (next.positive(), AnsweredBy::Script)
            }
        };
        self.session.record(e, answer, by)?;
        Ok(answer)
    }

    fn observe(&mut self, progress: &Progress<'_>) {
        self.session.progress(progress);
    }
}
