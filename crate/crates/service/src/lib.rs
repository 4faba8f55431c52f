//! HTTP/JSON sessions for playing the firefighter game by hand.
//!
//! | method | path | body | returns |
//! |---|---|---|---|
//! | `POST` | `/v1/sessions` | [`CreateRequest`] | `{"id", "view"}` |
//! | `GET` | `/v1/sessions/{id}/view?radius=r` | | [`View`] |
//! | `POST` | `/v1/sessions/{id}/protect` | [`ProtectRequest`] | [`View`] |
//! | `POST` | `/v1/sessions/{id}/step` | | [`View`] |
//! | `GET` | `/v1/sessions/{id}/hint` | | [`Hint`] |
//! | `GET` | `/v1/sessions/{id}/trace` | | JSON Lines trace |
//!
//! Failures return `{"error": {"code", "message", "vertices"}}`, with the
//! engine's error codes (`budget-exceeded`, `protecting-burning-vertex`, ...)
//! for illegal moves, and `game-over` for moves after containment. A rejected
//! request never changes the session.

pub mod error;
pub mod session;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

pub use error::ApiError;
pub use session::{CreateRequest, Hint, ProtectRequest, Session, Status, View, ViewVertex};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub idle_timeout: Duration,
    pub max_sessions: usize,
    pub default_view_radius: usize,
    pub max_view_radius: usize,
    pub vertex_cap: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            idle_timeout: Duration::from_secs(30 * 60),
            max_sessions: 1024,
            default_view_radius: 3,
            max_view_radius: 32,
            vertex_cap: session::VIEW_VERTEX_CAP,
        }
    }
}

/// Shared registry of live sessions. Each session sits behind its own lock,
/// so requests to one session are serialized while sessions stay independent.
#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<String, Arc<Mutex<Session>>>>>,
    config: Arc<ServiceConfig>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        AppState {
            sessions: Arc::default(),
            config: Arc::new(config),
        }
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }

    /// Runs `f` on the session under its lock and marks it as used.
    fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, ApiError>,
    ) -> Result<T, ApiError> {
        let s = self.get(id)?;
        let mut s = s.lock().unwrap();
        s.touched = Instant::now();
        f(&mut s)
    }

    /// Drops sessions idle since before `now - idle_timeout`. Sessions busy
    /// with a request are kept.
    pub fn evict_idle(&self, now: Instant) -> usize {
        let timeout = self.config.idle_timeout;
        let mut sessions = self.sessions.lock().unwrap();
        let before = sessions.len();
        sessions.retain(|_, s| match s.try_lock() {
            Ok(s) => now.saturating_duration_since(s.touched) < timeout,
            Err(_) => true,
        });
        before - sessions.len()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ViewQuery {
    radius: Option<usize>,
}

async fn create(
    State(app): State<AppState>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<impl IntoResponse, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    if app.session_count() >= app.config.max_sessions {
        app.evict_idle(Instant::now());
        if app.session_count() >= app.config.max_sessions {
            return Err(ApiError::new(
                StatusCode::SERVICE_UNAVAILABLE,
                "too-many-sessions",
                "session limit reached",
            ));
        }
    }
    let id = uuid::Uuid::new_v4().to_string();
    let session = Session::create(
        id.clone(),
        req,
        app.config.default_view_radius,
        app.config.vertex_cap,
    )?;
    let radius = session.view_radius().min(app.config.max_view_radius);
    let view = session.view(radius)?;
    app.sessions
        .lock()
        .unwrap()
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "view": view }))))
}

fn radius_for(app: &AppState, s: &Session, requested: Option<usize>) -> Result<usize, ApiError> {
    let r = requested.unwrap_or(s.view_radius());
    if r > app.config.max_view_radius {
        return Err(ApiError::bad_request(format!(
            "radius {r} exceeds the limit {}",
            app.config.max_view_radius
        )));
    }
    Ok(r)
}

async fn view(
    State(app): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<ViewQuery>, QueryRejection>,
) -> Result<Json<View>, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::bad_request(e.body_text()))?;
    app.with_session(&id, |s| s.view(radius_for(&app, s, q.radius)?))
        .map(Json)
}

async fn protect(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<ProtectRequest>, JsonRejection>,
) -> Result<Json<View>, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    app.with_session(&id, |s| {
        s.protect(&req)?;
        s.view(radius_for(&app, s, None)?)
    })
    .map(Json)
}

async fn step(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<View>, ApiError> {
    app.with_session(&id, |s| {
        s.step()?;
        s.view(radius_for(&app, s, None)?)
    })
    .map(Json)
}

async fn hint(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<Hint>, ApiError> {
    app.with_session(&id, |s| s.hint()).map(Json)
}

async fn trace(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ApiError> {
    let text = app.with_session(&id, |s| Ok(s.trace()))?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], text))
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/v1/sessions", post(create))
        .route("/v1/sessions/{id}/view", get(view))
        .route("/v1/sessions/{id}/protect", post(protect))
        .route("/v1/sessions/{id}/step", post(step))
        .route("/v1/sessions/{id}/hint", get(hint))
        .route("/v1/sessions/{id}/trace", get(trace))
        .with_state(app)
}
