//! Stateless JSON service. Every request carries the full game state.

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cookie_core::game::{GameEngine, GamePosition, PositionClass, Status};
use cookie_core::solver::{solve_with, SolveOptions};
use cookie_core::{Error, Exec, JarSet, Move};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

#[derive(Clone, Debug)]
pub struct ApiConfig {
    /// Largest jar value accepted by the game endpoints.
    pub game_limit: u64,
    pub max_jars: usize,
    /// Largest set `/api/solve` accepts; bigger sets can take very long.
    pub max_solve_jars: usize,
    pub static_dir: Option<PathBuf>,
}

impl Default for ApiConfig {
    fn default() -> Self {
        ApiConfig {
            game_limit: cookie_core::game::DEFAULT_GAME_LIMIT,
            max_jars: 3,
            max_solve_jars: 12,
            static_dir: None,
        }
    }
}

#[derive(Clone)]
struct AppState {
    engine: Arc<GameEngine>,
    config: Arc<ApiConfig>,
}

pub fn router(config: ApiConfig) -> Router {
    let state = AppState {
        engine: Arc::new(GameEngine::new(config.game_limit)),
        config: Arc::new(config.clone()),
    };
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/game/eval", post(eval))
        .route("/api/game/step", post(step))
        .route("/api/solve", post(solve))
        .with_state(state);
    match config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    reason: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(reason: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            reason,
            message: message.into(),
        }
    }

    fn limit(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            reason: "limit_exceeded",
            message: message.into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded { .. } => ApiError::limit(e.to_string()),
            Error::InvalidMove(_) => ApiError::bad_request("invalid_move", e.to_string()),
            Error::NoMoves => ApiError::bad_request("no_moves", e.to_string()),
            _ => ApiError::bad_request("invalid_request", e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({ "error": self.message, "reason": self.reason })),
        )
            .into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request("malformed", format!("malformed body: {e}")))
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "ok": true }))
}

#[derive(Debug, Deserialize)]
struct EvalRequest {
    jars: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalResponse {
    /// Canonical (ascending) order; move targets index this.
    pub jars: Vec<u64>,
    pub status: Status,
    pub winning_moves: Vec<Move>,
}

impl AppState {
    fn check_jars(&self, jars: &[u64]) -> Result<(), ApiError> {
        if jars.len() > self.config.max_jars {
            return Err(ApiError::limit(format!(
                "jar count {} exceeds the limit of {}",
                jars.len(),
                self.config.max_jars
            )));
        }
        if let Some(&m) = jars.iter().max().filter(|&&m| m > self.config.game_limit) {
            return Err(ApiError::limit(format!(
                "jar value {m} exceeds the limit of {}",
                self.config.game_limit
            )));
        }
        Ok(())
    }

    async fn classify(&self, pos: GamePosition) -> Result<PositionClass, ApiError> {
        let engine = Arc::clone(&self.engine);
        run_blocking(move || engine.classify(&pos)).await
    }
}

async fn run_blocking<T: Send + 'static>(
    f: impl FnOnce() -> cookie_core::Result<T> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            reason: "internal",
            message: e.to_string(),
        })?
        .map_err(ApiError::from)
}

async fn eval(State(state): State<AppState>, body: Bytes) -> Result<Json<EvalResponse>, ApiError> {
    let req: EvalRequest = parse_body(&body)?;
    state.check_jars(&req.jars)?;
    let pos = GamePosition::new(req.jars);
    let class = state.classify(pos.clone()).await?;
    Ok(Json(EvalResponse {
        jars: pos.into(),
        status: class.status,
        winning_moves: class.winning_moves,
    }))
}

#[derive(Debug, Deserialize)]
struct StepRequest {
    jars: Vec<u64>,
    /// Human move; targets index `jars` as sent. Absent: the engine moves.
    #[serde(rename = "move")]
    mv: Option<Move>,
    /// When false the engine does not answer the human move.
    #[serde(default = "yes")]
    reply: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    HumanToMove,
    EngineToMove,
    HumanWon,
    EngineWon,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepResponse {
    /// State after the human move (canonical).
    pub applied: Vec<u64>,
    pub engine_reply: Option<Move>,
    /// State after the engine reply (canonical).
    pub jars: Vec<u64>,
    pub status: StepStatus,
    /// Classification of `jars` while the game goes on.
    pub analysis: Option<PositionClass>,
}

/// Applies a move whose targets index `jars` in the order given.
fn apply_raw(jars: &[u64], mv: &Move) -> Result<GamePosition, ApiError> {
    if mv.amount == 0 {
        return Err(ApiError::bad_request(
            "invalid_move",
            "amount must be positive",
        ));
    }
    if mv.targets.is_empty() {
        return Err(ApiError::bad_request("invalid_move", "no jars chosen"));
    }
    let mut next = jars.to_vec();
    for &i in &mv.targets {
        let Some(v) = next.get_mut(i) else {
            return Err(ApiError::bad_request(
                "invalid_move",
                format!("jar index {i} out of range"),
            ));
        };
        if *v < mv.amount {
            return Err(ApiError::bad_request(
                "invalid_move",
                format!("jar {i} holds {v} cookies, cannot take {}", mv.amount),
            ));
        }
        *v -= mv.amount;
    }
    Ok(GamePosition::new(next))
}

async fn step(State(state): State<AppState>, body: Bytes) -> Result<Json<StepResponse>, ApiError> {
    let req: StepRequest = parse_body(&body)?;
    state.check_jars(&req.jars)?;
    let applied = match &req.mv {
        Some(mv) => {
            // Targets are deduplicated by Move's constructor only; reject repeats.
            let mut t = mv.targets.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != mv.targets.len() {
                return Err(ApiError::bad_request("invalid_move", "jar index repeated"));
            }
            apply_raw(&req.jars, mv)?
        }
        None => {
            let pos = GamePosition::new(req.jars.clone());
            if pos.is_terminal() {
                return Err(Error::NoMoves.into());
            }
            pos
        }
    };
    if req.mv.is_some() && applied.is_terminal() {
        return Ok(Json(StepResponse {
            applied: applied.clone().into(),
            engine_reply: None,
            jars: applied.into(),
            status: StepStatus::HumanWon,
            analysis: None,
        }));
    }
    if !req.reply {
        let analysis = state.classify(applied.clone()).await?;
        return Ok(Json(StepResponse {
            applied: applied.clone().into(),
            engine_reply: None,
            jars: applied.into(),
            status: StepStatus::EngineToMove,
            analysis: Some(analysis),
        }));
    }
    let engine = Arc::clone(&state.engine);
    let from = applied.clone();
    let best = run_blocking(move || engine.best_move(&from)).await?;
    let (status, analysis) = if best.successor.is_terminal() {
        (StepStatus::EngineWon, None)
    } else {
        (
            StepStatus::HumanToMove,
            Some(state.classify(best.successor.clone()).await?),
        )
    };
    Ok(Json(StepResponse {
        applied: applied.into(),
        engine_reply: Some(best.mv),
        jars: best.successor.into(),
        status,
        analysis,
    }))
}

#[derive(Debug, Deserialize)]
struct SolveRequest {
    set: Vec<u64>,
}

async fn solve(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: SolveRequest = parse_body(&body)?;
    let set = JarSet::new(req.set);
    if set.len() > state.config.max_solve_jars {
        return Err(ApiError::limit(format!(
            "set size {} exceeds the limit of {}",
            set.len(),
            state.config.max_solve_jars
        )));
    }
    let opts = SolveOptions {
        exec: Exec::Parallel,
        ..Default::default()
    };
    let result = run_blocking(move || solve_with(&set, &opts)).await?;
    Ok(Json(result).into_response())
}
