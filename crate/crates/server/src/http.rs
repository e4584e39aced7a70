//! The HTTP wire API over [`Service`].

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use crate::service::{CreateSession, PostActions, Service, ServiceError};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::UnknownForm(_)
            | ServiceError::UnknownSample(_)
            | ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ServiceError::Expired(_) => StatusCode::GONE,
            ServiceError::SessionTerminated(_)
            | ServiceError::AlreadySubmitted(_)
            | ServiceError::NotSubmitted(_) => StatusCode::CONFLICT,
            ServiceError::ViewportTooSmall(_)
            | ServiceError::UnknownTheme(_)
            | ServiceError::SampleFormMismatch { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = json!({ "error": self.code(), "message": self.to_string() });
        (status, Json(body)).into_response()
    }
}

type Shared = State<Arc<Service>>;

/// Runs `f` on the blocking pool: rendering and scoring are CPU-bound.
async fn blocking<T: Send + 'static>(
    service: Arc<Service>,
    f: impl FnOnce(&Service) -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(move || f(&service))
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))?
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ServiceError> {
    payload
        .map(|Json(v)| v)
        .map_err(|e| ServiceError::BadRequest(e.body_text()))
}

fn png(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "image/png")], Bytes::from(bytes)).into_response()
}

async fn create_session(
    State(s): Shared,
    payload: Result<Json<CreateSession>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let request = body(payload)?;
    let handle = blocking(s, move |s| s.create_session(request)).await?;
    Ok((StatusCode::CREATED, Json(handle)))
}

async fn get_session(
    State(s): Shared,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(s, move |s| s.handle(&id)).await?))
}

async fn screenshot(State(s): Shared, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(png(blocking(s, move |s| s.screenshot(&id)).await?))
}

async fn post_actions(
    State(s): Shared,
    Path(id): Path<String>,
    payload: Result<Json<PostActions>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let request = body(payload)?;
    Ok(Json(
        blocking(s, move |s| s.post_actions(&id, request)).await?,
    ))
}

async fn submit(
    State(s): Shared,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(s, move |s| s.submit(&id)).await?))
}

async fn report(
    State(s): Shared,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(s, move |s| s.report(&id)).await?))
}

async fn episode_log(State(s): Shared, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let log = blocking(s, move |s| s.episode_log(&id)).await?;
    Ok((
        [(header::CONTENT_TYPE, "application/x-ndjson")],
        log.to_jsonl(),
    )
        .into_response())
}

async fn replay_frame(
    State(s): Shared,
    Path((id, step)): Path<(String, usize)>,
) -> Result<Response, ServiceError> {
    Ok(png(blocking(s, move |s| s.replay_frame(&id, step)).await?))
}

async fn forms(State(s): Shared) -> impl IntoResponse {
    Json(s.forms())
}

async fn samples(
    State(s): Shared,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(s.samples(&id)?))
}

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/screenshot", get(screenshot))
        .route("/sessions/{id}/actions", post(post_actions))
        .route("/sessions/{id}/submit", post(submit))
        .route("/sessions/{id}/report", get(report))
        .route("/sessions/{id}/log", get(episode_log))
        .route("/sessions/{id}/frames/{step}", get(replay_frame))
        .route("/forms", get(forms))
        .route("/forms/{id}/samples", get(samples))
        .with_state(service)
}
