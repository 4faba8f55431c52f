use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use firebreak_core::GameError;
use serde::Serialize;
use serde_json::json;

/// Error returned by every endpoint as
/// `{"error": {"code", "message", "vertices"}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub vertices: Vec<String>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.into(),
            message: message.into(),
            vertices: Vec::new(),
        }
    }

    pub fn unprocessable(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid-request", message)
    }

    pub fn unknown_session(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "unknown-session",
            format!("no session `{id}`"),
        )
    }

    pub fn with_vertices(mut self, vertices: Vec<String>) -> Self {
        self.vertices = vertices;
        self
    }
}

impl From<GameError> for ApiError {
    fn from(e: GameError) -> Self {
        ApiError::unprocessable(e.code(), e.to_string()).with_vertices(e.offending())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self }))).into_response()
    }
}
