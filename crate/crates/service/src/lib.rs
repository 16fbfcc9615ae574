//! JSON API over a single editing session.

mod session;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tokio::sync::RwLock;
use tower_http::services::ServeDir;

use semsnap_core::operations::Answer;

pub use session::{Position, Session, SessionError, Snapshot};

/// Shared handle: reads run concurrently, mutations one at a time.
pub type SharedSession = Arc<RwLock<Session>>;

pub fn shared(session: Session) -> SharedSession {
    Arc::new(RwLock::new(session))
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: &'static str,
    detail: String,
}

pub struct ApiError(SessionError);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        use SessionError::*;
        let (status, error) = match &self.0 {
            UnknownView(_) => (StatusCode::NOT_FOUND, "unknown-view"),
            UnknownPlan(_) => (StatusCode::NOT_FOUND, "unknown-operation"),
            StalePlan(_) => (StatusCode::CONFLICT, "stale-plan"),
            Pending => (StatusCode::CONFLICT, "pending"),
            NothingPending => (StatusCode::CONFLICT, "nothing-pending"),
            Contradiction(_) => (StatusCode::CONFLICT, "contradiction"),
            NoSavePath => (StatusCode::CONFLICT, "no-save-path"),
            MissingConfirmation(_) => (StatusCode::BAD_REQUEST, "missing-confirmation"),
            BadField(_) => (StatusCode::BAD_REQUEST, "bad-field"),
            Operation(_) => (StatusCode::BAD_REQUEST, "operation-failed"),
            Render(_) => (StatusCode::BAD_REQUEST, "render-failed"),
            Save { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "save-failed"),
        };
        let body = ErrorBody {
            error,
            detail: self.0.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct ApplyBody {
    confirmations: Vec<Answer>,
}

#[derive(Debug, Deserialize)]
struct EquivalenceBody {
    a: String,
    b: String,
    same: bool,
}

#[derive(Debug, Serialize)]
struct Saved {
    path: String,
}

async fn canvas(State(s): State<SharedSession>) -> Json<semsnap_core::spec_io::CanvasDocument> {
    Json(s.read().await.document())
}

async fn relations(State(s): State<SharedSession>) -> Json<semsnap_core::spec_io::LintReport> {
    Json(s.read().await.lint())
}

async fn operations(
    State(s): State<SharedSession>,
    Path(id): Path<String>,
) -> ApiResult<semsnap_core::spec_io::PlanMenu> {
    Ok(Json(s.read().await.menu(&id)?))
}

async fn apply(
    State(s): State<SharedSession>,
    Path(id): Path<String>,
    body: Option<Json<ApplyBody>>,
) -> ApiResult<Snapshot> {
    let body = body.map(|Json(b)| b).unwrap_or_default();
    Ok(Json(s.write().await.apply(&id, &body.confirmations)?))
}

async fn undo(State(s): State<SharedSession>) -> ApiResult<Snapshot> {
    Ok(Json(s.write().await.undo()?))
}

async fn keep(State(s): State<SharedSession>) -> ApiResult<Snapshot> {
    Ok(Json(s.write().await.keep()?))
}

async fn equivalences(State(s): State<SharedSession>, Json(body): Json<EquivalenceBody>) -> ApiResult<Snapshot> {
    Ok(Json(s.write().await.confirm(&body.a, &body.b, body.same)?))
}

async fn render(State(s): State<SharedSession>) -> ApiResult<Vec<semsnap_core::render::PlacedSpec>> {
    Ok(Json(s.read().await.render()?))
}

async fn position(State(s): State<SharedSession>) -> Json<Position> {
    Json(s.read().await.position())
}

async fn save(State(s): State<SharedSession>) -> ApiResult<Saved> {
    let path = s.read().await.save()?;
    Ok(Json(Saved {
        path: path.display().to_string(),
    }))
}

/// The API routes, plus the UI bundle at `/` when a directory is given.
pub fn router(session: SharedSession, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/canvas", get(canvas).put(save))
        .route("/api/relations", get(relations))
        .route("/api/views/{id}/operations", get(operations))
        .route("/api/operations/{id}/apply", post(apply))
        .route("/api/history/undo", post(undo))
        .route("/api/history/keep", post(keep))
        .route("/api/equivalences", post(equivalences))
        .route("/api/render", get(render))
        .route("/api/position", get(position))
        .with_state(session);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds first so the caller can report a busy port before serving.
pub async fn bind(addr: SocketAddr) -> std::io::Result<TcpListener> {
    TcpListener::bind(addr).await
}

pub async fn serve(listener: TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app).await
}
