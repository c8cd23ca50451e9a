//! HTTP/JSON service for playing against the engine.
//!
//! [`GameService`] holds the sessions and is synchronous; the axum handlers
//! in [`router`] run it on the blocking pool. Each session sits behind its
//! own mutex, so requests for one game are serialized while different games
//! proceed independently.
//!
//! Stack numbers in JSON are 1-based.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cnim_core::characterize::CharacterizedGame;
use cnim_core::game::{apply_move, option_count, GameSpec, Height, Move, Position};
use cnim_core::solver::{best_move_bruteforce, OutcomeTable, Outcome, SolveLimits};
use cnim_core::strategy::winning_move;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::solve_cached;
use crate::explore::canonical_losses;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ServiceError {
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    OutOfRange(String),
    #[error("{0}")]
    IllegalMove(String),
    #[error("it is not your turn or the game is over")]
    WrongTurn,
    #[error("no game with id {0}")]
    UnknownSession(String),
    #[error("{0}")]
    BadRequest(String),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::Unsupported(_) => "UNSUPPORTED",
            ServiceError::OutOfRange(_) => "OUT_OF_RANGE",
            ServiceError::IllegalMove(_) => "ILLEGAL_MOVE",
            ServiceError::WrongTurn => "WRONG_TURN",
            ServiceError::UnknownSession(_) => "UNKNOWN_SESSION",
            ServiceError::BadRequest(_) => "BAD_REQUEST",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EngineMode {
    /// Closed-form strategy; needs a characterized game.
    Theorem,
    /// Solved table; heights bounded by the service's table height.
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    Human,
    Engine,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Human => Side::Engine,
            Side::Engine => Side::Human,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ongoing,
    Finished,
}

/// Wire form of a session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub n: usize,
    pub k: usize,
    pub position: Vec<Height>,
    pub to_move: Side,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub winner: Option<Side>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSession {
    pub id: String,
    pub n: usize,
    pub k: usize,
    pub position: Vec<Height>,
    pub to_move: Side,
    pub engine_mode: EngineMode,
    /// Set once the board is empty; the side that emptied it wins.
    pub winner: Option<Side>,
}

impl GameSession {
    pub fn status(&self) -> Status {
        if self.winner.is_some() {
            Status::Finished
        } else {
            Status::Ongoing
        }
    }

    pub fn state(&self) -> GameState {
        GameState {
            n: self.n,
            k: self.k,
            position: self.position.clone(),
            to_move: self.to_move,
            status: self.status(),
            winner: self.winner,
        }
    }

    fn spec(&self) -> GameSpec {
        GameSpec::new(self.n, self.k).expect("validated at creation")
    }

    fn play(&mut self, next: Position) {
        let mover = self.to_move;
        self.position = next.into_heights();
        self.to_move = mover.other();
        if self.position.iter().all(|&h| h == 0) {
            self.winner = Some(mover);
        }
    }
}

/// Wire form of a move: 1-based window start and the `k` removal amounts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveJson {
    pub start: usize,
    pub removals: Vec<Height>,
}

impl MoveJson {
    pub fn from_move(mv: &Move) -> Self {
        MoveJson { start: mv.start + 1, removals: mv.removals.clone() }
    }

    pub fn to_move(&self) -> Result<Move, ServiceError> {
        if self.start == 0 {
            return Err(ServiceError::IllegalMove("stacks are numbered from 1".into()));
        }
        Ok(Move::new(self.start - 1, self.removals.clone()))
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct CreateRequest {
    pub n: usize,
    pub k: usize,
    pub position: Vec<Height>,
    #[serde(default = "default_true")]
    pub human_first: bool,
    #[serde(default = "default_mode")]
    pub engine_mode: EngineMode,
}

fn default_true() -> bool {
    true
}

fn default_mode() -> EngineMode {
    EngineMode::Theorem
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineReply {
    #[serde(rename = "move")]
    pub mv: MoveJson,
    pub state: GameState,
    /// The engine had no winning move and stalled.
    pub position_was_losing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `"LOSS"` or `"WIN"`; absent without a closed form.
    pub theorem: Option<String>,
    /// Absent when the game is too large to solve up to this position.
    pub solver: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ServiceConfig {
    /// Table height for TABLE mode; defaults per game from the solver budget.
    pub table_height: Option<u16>,
    pub cache_dir: Option<PathBuf>,
    pub limits: SolveLimits,
}

pub struct GameService {
    config: ServiceConfig,
    sessions: RwLock<HashMap<String, Arc<Mutex<GameSession>>>>,
    tables: Mutex<HashMap<GameSpec, Arc<OutcomeTable>>>,
}

impl GameService {
    pub fn new(config: ServiceConfig) -> Self {
        GameService { config, sessions: RwLock::new(HashMap::new()), tables: Mutex::new(HashMap::new()) }
    }

    fn table_height(&self, spec: &GameSpec) -> u16 {
        self.config.table_height.unwrap_or_else(|| self.config.limits.default_height(spec.n()))
    }

    /// A table covering heights up to `h`, reusing any larger one held.
    fn table(&self, spec: &GameSpec, h: u16) -> Result<Arc<OutcomeTable>, ServiceError> {
        if let Some(t) = self.tables.lock().expect("table lock").get(spec) {
            if t.max_height() >= h {
                return Ok(t.clone());
            }
        }
        let (t, _) = solve_cached(spec, h, &self.config.limits, self.config.cache_dir.as_deref())
            .map_err(|e| ServiceError::OutOfRange(e.to_string()))?;
        let t = Arc::new(t);
        let mut tables = self.tables.lock().expect("table lock");
        let keep = tables.get(spec).is_none_or(|old| old.max_height() < t.max_height());
        if keep {
            tables.insert(*spec, t.clone());
        }
        Ok(t)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ServiceError> {
        self.sessions
            .read()
            .expect("session lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    pub fn create(&self, req: CreateRequest) -> Result<GameSession, ServiceError> {
        let spec = GameSpec::new(req.n, req.k).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        if req.position.len() != spec.n() {
            return Err(ServiceError::BadRequest(format!("expected {} stacks", spec.n())));
        }
        match req.engine_mode {
            EngineMode::Theorem => {
                if CharacterizedGame::for_spec(&spec).is_none() {
                    return Err(ServiceError::Unsupported(format!("no closed-form strategy is known for {spec}")));
                }
            }
            EngineMode::Table => {
                let h = self.table_height(&spec);
                let max = req.position.iter().copied().max().unwrap_or(0);
                if max > h as Height {
                    return Err(ServiceError::OutOfRange(format!("heights above {h} are outside the table for {spec}")));
                }
                self.table(&spec, h)?;
            }
        }
        let id = format!("{:032x}", rand::random::<u128>());
        let to_move = if req.human_first { Side::Human } else { Side::Engine };
        let empty = req.position.iter().all(|&h| h == 0);
        let session = GameSession {
            id: id.clone(),
            n: spec.n(),
            k: spec.k(),
            position: req.position,
            to_move,
            engine_mode: req.engine_mode,
            winner: empty.then(|| to_move.other()),
        };
        self.sessions.write().expect("session lock").insert(id, Arc::new(Mutex::new(session.clone())));
        Ok(session)
    }

    pub fn get(&self, id: &str) -> Result<GameSession, ServiceError> {
        Ok(self.session(id)?.lock().expect("session lock").clone())
    }

    pub fn human_move(&self, id: &str, mv: &MoveJson) -> Result<GameSession, ServiceError> {
        let cell = self.session(id)?;
        let mut s = cell.lock().expect("session lock");
        if s.status() == Status::Finished || s.to_move != Side::Human {
            return Err(ServiceError::WrongTurn);
        }
        let next = apply_move(&s.spec(), &Position::new(s.position.clone()), &mv.to_move()?)
            .map_err(|e| ServiceError::IllegalMove(e.to_string()))?;
        s.play(next);
        Ok(s.clone())
    }

    pub fn engine_move(&self, id: &str) -> Result<EngineReply, ServiceError> {
        let cell = self.session(id)?;
        let mut s = cell.lock().expect("session lock");
        if s.status() == Status::Finished || s.to_move != Side::Engine {
            return Err(ServiceError::WrongTurn);
        }
        let spec = s.spec();
        let pos = Position::new(s.position.clone());
        let winning = match s.engine_mode {
            EngineMode::Theorem => winning_move(&spec, &pos).ok(),
            EngineMode::Table => {
                let table = self.table(&spec, self.table_height(&spec))?;
                best_move_bruteforce(&spec, &pos, &table).ok()
            }
        };
        let position_was_losing = winning.is_none();
        let mv = winning.unwrap_or_else(|| stalling_move(&spec, &pos));
        let next = apply_move(&spec, &pos, &mv).map_err(|e| ServiceError::IllegalMove(e.to_string()))?;
        s.play(next);
        Ok(EngineReply { mv: MoveJson::from_move(&mv), state: s.state(), position_was_losing })
    }

    pub fn classify(&self, spec: &GameSpec, pos: &Position) -> Result<Classification, ServiceError> {
        if pos.len() != spec.n() {
            return Err(ServiceError::BadRequest(format!("expected {} stacks", spec.n())));
        }
        let theorem = CharacterizedGame::for_spec(spec)
            .map(|g| if g.contains(pos.heights()) { Outcome::Loss } else { Outcome::Win }.as_str().to_string());
        // a position's outcome only depends on positions below it
        let solver = u16::try_from(pos.max())
            .ok()
            .and_then(|h| self.table(spec, h).ok())
            .and_then(|t| t.outcome(pos).ok())
            .map(|o| o.as_str().to_string());
        Ok(Classification { theorem, solver })
    }

    pub fn losing_set(&self, spec: &GameSpec, h: u16) -> Result<Vec<Position>, ServiceError> {
        let table = self.table(spec, h)?;
        // a cached table may be taller than requested
        Ok(canonical_losses(&table).into_iter().filter(|p| Position::max(p) <= Height::from(h)).collect())
    }

    pub fn snapshot(&self) -> Vec<GameSession> {
        let sessions = self.sessions.read().expect("session lock");
        let mut out: Vec<GameSession> = sessions.values().map(|s| s.lock().expect("session lock").clone()).collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    pub fn restore(&self, sessions: Vec<GameSession>) {
        let mut map = self.sessions.write().expect("session lock");
        for s in sessions {
            if GameSpec::new(s.n, s.k).is_ok() && s.position.len() == s.n {
                map.insert(s.id.clone(), Arc::new(Mutex::new(s)));
            }
        }
    }
}

/// Takes one token from the stack that leaves the opponent the most
/// options; ties go to the lowest stack number. `pos` must be nonempty.
pub fn stalling_move(spec: &GameSpec, pos: &Position) -> Move {
    let h = pos.heights();
    let mut best: Option<(u128, usize)> = None;
    for i in (0..h.len()).filter(|&i| h[i] > 0) {
        let mut next = h.to_vec();
        next[i] -= 1;
        let score = if spec.n() <= 24 { option_count(spec, &Position::new(next)) } else { 0 };
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, i));
        }
    }
    let (_, stack) = best.expect("stalling needs a nonempty position");
    // the smallest window start covering `stack`
    let start = spec.window_containing(1 << stack).expect("every stack lies in a window");
    let mut removals = vec![0; spec.k()];
    removals[(stack + spec.n() - start) % spec.n()] = 1;
    Move::new(start, removals)
}

type Shared = Arc<GameService>;

struct ApiError(ServiceError);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.0.code(), "message": self.0.to_string() });
        (StatusCode::BAD_REQUEST, Json(body)).into_response()
    }
}

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError(e)
    }
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(ServiceError::BadRequest(format!("worker failed: {e}"))))?
        .map_err(ApiError)
}

fn parse_spec(n: usize, k: usize) -> Result<GameSpec, ServiceError> {
    GameSpec::new(n, k).map_err(|e| ServiceError::BadRequest(e.to_string()))
}

async fn create_game(State(svc): State<Shared>, body: Result<Json<CreateRequest>, axum::extract::rejection::JsonRejection>) -> Result<Json<serde_json::Value>, ApiError> {
    let Json(req) = body.map_err(|e| ServiceError::BadRequest(e.body_text()))?;
    let s = blocking(move || svc.create(req)).await?;
    Ok(Json(serde_json::json!({ "id": s.id, "state": s.state() })))
}

async fn get_game(State(svc): State<Shared>, Path(id): Path<String>) -> Result<Json<GameState>, ApiError> {
    Ok(Json(svc.get(&id)?.state()))
}

async fn post_move(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<MoveJson>, axum::extract::rejection::JsonRejection>,
) -> Result<Json<GameState>, ApiError> {
    let Json(mv) = body.map_err(|e| ServiceError::BadRequest(e.body_text()))?;
    let s = blocking(move || svc.human_move(&id, &mv)).await?;
    Ok(Json(s.state()))
}

async fn post_engine_move(State(svc): State<Shared>, Path(id): Path<String>) -> Result<Json<EngineReply>, ApiError> {
    Ok(Json(blocking(move || svc.engine_move(&id)).await?))
}

#[derive(Deserialize)]
struct ClassifyQuery {
    n: usize,
    k: usize,
    pos: String,
}

async fn get_classify(
    State(svc): State<Shared>,
    q: Result<Query<ClassifyQuery>, axum::extract::rejection::QueryRejection>,
) -> Result<Json<Classification>, ApiError> {
    let Query(q) = q.map_err(|e| ServiceError::BadRequest(e.body_text()))?;
    let spec = parse_spec(q.n, q.k)?;
    let pos: Position = q.pos.parse().map_err(|e: cnim_core::game::GameError| ServiceError::BadRequest(e.to_string()))?;
    Ok(Json(blocking(move || svc.classify(&spec, &pos)).await?))
}

#[derive(Deserialize)]
struct LosingSetQuery {
    n: usize,
    k: usize,
    max_height: u16,
}

async fn get_losing_set(
    State(svc): State<Shared>,
    q: Result<Query<LosingSetQuery>, axum::extract::rejection::QueryRejection>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let Query(q) = q.map_err(|e| ServiceError::BadRequest(e.body_text()))?;
    let spec = parse_spec(q.n, q.k)?;
    let h = q.max_height;
    let positions = blocking(move || svc.losing_set(&spec, h)).await?;
    let positions: Vec<&[Height]> = positions.iter().map(|p| p.heights()).collect();
    Ok(Json(serde_json::json!({ "n": q.n, "k": q.k, "max_height": h, "positions": positions })))
}

pub fn router(svc: Shared) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/engine-move", post(post_engine_move))
        .route("/classify", get(get_classify))
        .route("/losing-set", get(get_losing_set))
        .with_state(svc)
}

/// Serves until ctrl-c, then writes the sessions to `snapshot` if given.
pub async fn serve(port: u16, svc: Shared, snapshot: Option<PathBuf>) -> std::io::Result<()> {
    if let Some(path) = &snapshot {
        if let Ok(bytes) = std::fs::read(path) {
            if let Ok(sessions) = serde_json::from_slice::<Vec<GameSession>>(&bytes) {
                svc.restore(sessions);
            }
        }
    }
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    axum::serve(listener, router(svc.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(path) = snapshot {
        let json = serde_json::to_vec_pretty(&svc.snapshot()).map_err(std::io::Error::other)?;
        std::fs::write(path, json)?;
    }
    Ok(())
}
