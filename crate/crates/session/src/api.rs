//! HTTP routes.

use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;

use crate::protocol::{AnswerRequest, CreateRequest, ErrorBody, Snapshot, Transcript};
use crate::store::Store;
use crate::SessionError;

/// How long a request waits for the learner to post its next query.
const DEFAULT_SETTLE: Duration = Duration::from_secs(30);

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(snapshot).delete(abort))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/transcript", get(transcript))
        .with_state(store)
}

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self {
            SessionError::InvalidInstance(_) => (StatusCode::BAD_REQUEST, "InvalidInstance"),
            SessionError::InvalidRequest(_) => (StatusCode::BAD_REQUEST, "InvalidRequest"),
            SessionError::UnknownSession(_) => (StatusCode::NOT_FOUND, "UnknownSession"),
            SessionError::WrongPhase(_) => (StatusCode::CONFLICT, "WrongPhase"),
            SessionError::Internal(_) => (StatusCode::INTERNAL_SERVER_ERROR, "Internal"),
        };
        (status, Json(ErrorBody { error: kind.to_string(), message: self.to_string() })).into_response()
    }
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, SessionError> {
    payload.map(|Json(v)| v).map_err(|e| SessionError::InvalidRequest(e.body_text()))
}

#[derive(Debug, Deserialize)]
struct WaitParam {
    /// Seconds to wait while the learner is generating.
    wait: Option<f64>,
}

impl WaitParam {
    fn duration(&self, default: Duration) -> Duration {
        match self.wait {
            Some(w) if w.is_finite() && w >= 0.0 => Duration::from_secs_f64(w.min(600.0)),
            _ => default,
        }
    }
}

async fn create(
    State(store): State<Arc<Store>>,
    Query(wait): Query<WaitParam>,
    payload: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<Snapshot>), SessionError> {
    let req = body(payload)?;
    let store2 = Arc::clone(&store);
    // building large benchmarks and starting the learner is blocking work
    let session = tokio::task::spawn_blocking(move || store2.create(req))
        .await
        .map_err(|e| SessionError::Internal(e.to_string()))??;
    let snap = session.settle(wait.duration(Duration::ZERO)).await;
    Ok((StatusCode::CREATED, Json(snap)))
}

async fn snapshot(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    Query(wait): Query<WaitParam>,
) -> Result<Json<Snapshot>, SessionError> {
    let s = store.get(&id)?;
    Ok(Json(s.settle(wait.duration(Duration::ZERO)).await))
}

async fn answer(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    Query(wait): Query<WaitParam>,
    payload: Result<Json<AnswerRequest>, JsonRejection>,
) -> Result<Json<Snapshot>, SessionError> {
    let s = store.get(&id)?;
    let req = body(payload)?;
    s.answer(req.classification, req.index)?;
    Ok(Json(s.settle(wait.duration(DEFAULT_SETTLE)).await))
}

async fn abort(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Json<Snapshot>, SessionError> {
    Ok(Json(store.remove(&id)?.snapshot()))
}

async fn transcript(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Json<Transcript>, SessionError> {
    Ok(Json(store.get(&id)?.transcript()))
}
