//! A local HTTP service for interactive acquisition sessions.
//!
//! Each session runs a learner that suspends on every query until the
//! client posts a yes/no classification.

pub mod api;
pub mod protocol;
pub mod session;
pub mod store;

use std::sync::Arc;
use std::time::{Duration, Instant};

pub use api::router;
pub use protocol::{Phase, Snapshot};
pub use store::Store;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("no session `{0}`")]
    UnknownSession(String),
    #[error("session is {0:?}; no query is waiting for an answer")]
    WrongPhase(Phase),
    #[error("{0}")]
    Internal(String),
}

/// Periodically evicts idle sessions until the store is dropped.
pub fn spawn_sweeper(store: &Arc<Store>, every: Duration) -> tokio::task::JoinHandle<()> {
    let weak = Arc::downgrade(store);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(every);
        loop {
            tick.tick().await;
            let Some(store) = weak.upgrade() else { break };
            store.evict_idle(Instant::now());
        }
    })
}

/// Serves the API on `listener` until the task is cancelled.
pub async fn serve(listener: tokio::net::TcpListener, store: Arc<Store>) -> std::io::Result<()> {
    let sweep = (store.idle_timeout / 10).clamp(Duration::from_secs(1), Duration::from_secs(60));
    let _sweeper = spawn_sweeper(&store, sweep);
    axum::serve(listener, router(store)).await
}
