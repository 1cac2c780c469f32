//! JSON-over-HTTP API.
//!
//! Every JSON body this module emits escapes `<`, `>`, `&` and `'` as
//! `\u00XX` sequences, so no response can smuggle markup into a page even if
//! a client pastes it into HTML unescaped. The values decode unchanged.

use std::future::Future;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{FromRequest, FromRequestParts, Path, Request, State};
use axum::http::request::Parts;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{any, delete, get, post, put};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::auth::{self, AuthError, Session, SessionTable};
use crate::engine::{Engine, EngineError};
use crate::evalkit;
use crate::sanitize::sanitize;
use crate::store::{
    FeedbackEntry, InfoEntry, InfoUpdate, LogEntry, NewFeedback, NewInfo, Role, StoreError,
};

pub type Clock = Arc<dyn Fn() -> u64 + Send + Sync>;

#[derive(Clone)]
pub struct AppState {
    pub engine: Arc<Engine>,
    pub sessions: Arc<SessionTable>,
    pub clock: Clock,
}

impl AppState {
    pub fn new(engine: Arc<Engine>, session_ttl_hours: u64) -> Self {
        Self {
            engine,
            sessions: Arc::new(SessionTable::new(session_ttl_hours)),
            clock: Arc::new(auth::now_unix),
        }
    }

    pub fn with_clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }
}

/// Serializes JSON with markup-significant characters escaped.
pub fn to_safe_json<T: Serialize>(value: &T) -> Vec<u8> {
    let raw = serde_json::to_string(value).expect("response serializes");
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars() {
        match c {
            '<' => out.push_str("\\u003c"),
            '>' => out.push_str("\\u003e"),
            '&' => out.push_str("\\u0026"),
            '\'' => out.push_str("\\u0027"),
            c => out.push(c),
        }
    }
    out.into_bytes()
}

pub struct SafeJson<T>(pub StatusCode, pub T);

impl<T: Serialize> IntoResponse for SafeJson<T> {
    fn into_response(self) -> Response {
        let mut res = (self.0, to_safe_json(&self.1)).into_response();
        res.headers_mut().insert(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        );
        res.headers_mut().insert(
            header::X_CONTENT_TYPE_OPTIONS,
            HeaderValue::from_static("nosniff"),
        );
        res
    }
}

fn ok<T: Serialize>(value: T) -> SafeJson<T> {
    SafeJson(StatusCode::OK, value)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn not_found() -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", "no such resource")
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        SafeJson(
            self.status,
            json!({ "error": self.code, "message": self.message }),
        )
        .into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Validation { .. } => {
                Self::new(StatusCode::BAD_REQUEST, "validation", e.to_string())
            }
            StoreError::NotFound { .. } => {
                Self::new(StatusCode::NOT_FOUND, "not_found", e.to_string())
            }
            StoreError::DuplicateUser(_) => {
                Self::new(StatusCode::BAD_REQUEST, "validation", e.to_string())
            }
            StoreError::Corrupt { .. } | StoreError::Io { .. } => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "storage",
                "storage failure",
            ),
        }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::QuestionTooLong(_) => {
                Self::new(StatusCode::BAD_REQUEST, "question_too_long", e.to_string())
            }
            EngineError::EmptyQuestion => {
                Self::new(StatusCode::BAD_REQUEST, "validation", e.to_string())
            }
            EngineError::NotReady => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "engine_not_ready",
                e.to_string(),
            ),
            EngineError::Store(s) => s.into(),
            other => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                other.to_string(),
            ),
        }
    }
}

impl From<AuthError> for ApiError {
    fn from(e: AuthError) -> Self {
        match e {
            AuthError::BadCredentials | AuthError::EmptyPassword => Self::new(
                StatusCode::UNAUTHORIZED,
                "bad_credentials",
                "invalid username or password",
            ),
            AuthError::Unauthorized => {
                Self::new(StatusCode::UNAUTHORIZED, "unauthorized", e.to_string())
            }
            AuthError::Forbidden => Self::new(StatusCode::FORBIDDEN, "forbidden", e.to_string()),
            other => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                other.to_string(),
            ),
        }
    }
}

/// JSON request body whose parse errors come back as [`ApiError`]s.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        let bytes = Bytes::from_request(req, state)
            .await
            .map_err(|_| ApiError::bad_request("could not read request body"))?;
        serde_json::from_slice(&bytes)
            .map(Body)
            .map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
    }
}

/// A live administrator session taken from `Authorization: Bearer <token>`.
pub struct Admin(pub Session);

impl FromRequestParts<AppState> for Admin {
    type Rejection = ApiError;

    fn from_request_parts(
        parts: &mut Parts,
        state: &AppState,
    ) -> impl Future<Output = Result<Self, Self::Rejection>> + Send {
        let token = parts
            .headers
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .map(str::trim)
            .map(str::to_owned);
        let now = (state.clock)();
        let result = auth::require_role(&state.sessions, token.as_deref(), Role::Admin, now)
            .map(Admin)
            .map_err(ApiError::from);
        std::future::ready(result)
    }
}

fn parse_id(raw: &str) -> Result<u64, ApiError> {
    raw.parse().map_err(|_| ApiError::not_found())
}

#[derive(Deserialize)]
struct ChatRequest {
    question: String,
}

#[derive(Deserialize)]
struct UnsatisfiedRequest {
    question: String,
    #[serde(default)]
    answer: String,
}

#[derive(Deserialize)]
struct LoginRequest {
    username: String,
    password: String,
}

async fn chat(
    State(st): State<AppState>,
    Body(req): Body<ChatRequest>,
) -> Result<impl IntoResponse, ApiError> {
    Ok(ok(st.engine.handle_chat(&req.question)?))
}

async fn unsatisfied(
    State(st): State<AppState>,
    Body(req): Body<UnsatisfiedRequest>,
) -> Result<impl IntoResponse, ApiError> {
    Ok(ok(st
        .engine
        .handle_unsatisfied(&req.question, &req.answer)?))
}

async fn feedback(
    State(st): State<AppState>,
    Body(req): Body<NewFeedback>,
) -> Result<impl IntoResponse, ApiError> {
    let id = st.engine.store().append(NewFeedback {
        mark: req.mark,
        message: sanitize(&req.message),
    })?;
    Ok(SafeJson(StatusCode::CREATED, json!({ "id": id })))
}

async fn login(
    State(st): State<AppState>,
    Body(req): Body<LoginRequest>,
) -> Result<impl IntoResponse, ApiError> {
    let session = auth::authenticate(
        st.engine.store(),
        &st.sessions,
        &req.username,
        &req.password,
        (st.clock)(),
    )?;
    Ok(ok(
        json!({ "token": session.token, "expires": session.expires }),
    ))
}

async fn list_info(_: Admin, State(st): State<AppState>) -> impl IntoResponse {
    ok(st.engine.store().list::<InfoEntry>())
}

async fn add_info(
    _: Admin,
    State(st): State<AppState>,
    Body(req): Body<NewInfo>,
) -> Result<impl IntoResponse, ApiError> {
    let store = st.engine.store();
    let id = store.append(NewInfo {
        question: sanitize(&req.question),
        answer: sanitize(&req.answer),
        keywords: req.keywords,
    })?;
    Ok(SafeJson(StatusCode::CREATED, store.get::<InfoEntry>(id)))
}

async fn update_info(
    _: Admin,
    State(st): State<AppState>,
    Path(id): Path<String>,
    Body(req): Body<InfoUpdate>,
) -> Result<impl IntoResponse, ApiError> {
    let update = InfoUpdate {
        question: req.question.as_deref().map(sanitize),
        answer: req.answer.as_deref().map(sanitize),
        keywords: req.keywords,
    };
    Ok(ok(st.engine.store().update_info(parse_id(&id)?, update)?))
}

async fn delete_info(
    _: Admin,
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ApiError> {
    Ok(ok(st.engine.store().delete::<InfoEntry>(parse_id(&id)?)?))
}

async fn list_logs(_: Admin, State(st): State<AppState>) -> impl IntoResponse {
    ok(st.engine.store().list::<LogEntry>())
}

async fn delete_log(
    _: Admin,
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ApiError> {
    Ok(ok(st.engine.store().delete::<LogEntry>(parse_id(&id)?)?))
}

async fn list_feedback(_: Admin, State(st): State<AppState>) -> impl IntoResponse {
    ok(st.engine.store().list::<FeedbackEntry>())
}

async fn delete_feedback(
    _: Admin,
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ApiError> {
    Ok(ok(st
        .engine
        .store()
        .delete::<FeedbackEntry>(parse_id(&id)?)?))
}

async fn overall(_: Admin, State(st): State<AppState>) -> impl IntoResponse {
    let all = st.engine.store().list::<FeedbackEntry>();
    ok(json!({ "mean": evalkit::overall(&all), "count": all.len() }))
}

async fn stats(_: Admin, State(st): State<AppState>) -> impl IntoResponse {
    ok(evalkit::breakdown(&st.engine.store().list::<LogEntry>()))
}

async fn fallback() -> ApiError {
    ApiError::not_found()
}

/// Every API route. Static client files, when configured, are layered on by
/// the caller.
pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/chat", post(chat))
        .route("/api/chat/unsatisfied", post(unsatisfied))
        .route("/api/feedback", post(feedback))
        .route("/api/login", post(login))
        .route("/api/admin/info", get(list_info).post(add_info))
        .route("/api/admin/info/{id}", put(update_info).delete(delete_info))
        .route("/api/admin/logs", get(list_logs))
        .route("/api/admin/logs/{id}", delete(delete_log))
        .route("/api/admin/feedback", get(list_feedback))
        .route("/api/admin/feedback/overall", get(overall))
        .route("/api/admin/feedback/{id}", delete(delete_feedback))
        .route("/api/admin/stats", get(stats))
        .route("/api/{*rest}", any(fallback))
        .fallback(fallback)
        .with_state(state)
}
