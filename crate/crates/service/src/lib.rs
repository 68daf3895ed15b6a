//! HTTP job API over the engine.
//!
//! Jobs are queued on a bounded channel and executed by a fixed number of
//! workers, one blocking thread per running job. Finished results live in an
//! in-memory store that evicts the least recently used finished jobs.
//!
//! Grid payloads come as JSON (`{"t": [...], "x": [...], "values": [[...]]}`)
//! or, with `format=bin`, as a flat little-endian buffer: two `u64` words
//! `rows, cols`, then `rows` time samples, then `rows * cols` values in
//! row-major order. Rows are selected by stride (`0, S, 2S, ...`), never
//! interpolated.

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use flexsim::scenario::{parse_scenario_json, parse_scenario_toml};
use flexsim::{run_with_progress, Error, FieldError, RunOptions, Scenario, SimulationResult};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::mpsc;
use tower_http::services::ServeDir;
use uuid::Uuid;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Concurrent jobs.
    pub workers: usize,
    /// Jobs that may wait for a worker before submissions get 503.
    pub queue_capacity: usize,
    /// Finished jobs kept in memory.
    pub store_capacity: usize,
    /// Directory served at `/`.
    pub static_dir: Option<PathBuf>,
    /// When set, every finished job is also written there as a bundle named
    /// after its id.
    pub results_dir: Option<PathBuf>,
    pub run_options: RunOptions,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            queue_capacity: 64,
            store_capacity: 32,
            static_dir: None,
            results_dir: None,
            run_options: RunOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Failed,
}

impl JobState {
    fn finished(self) -> bool {
        matches!(self, JobState::Done | JobState::Failed)
    }
}

#[derive(Debug, Clone)]
pub struct JobRecord {
    pub id: Uuid,
    pub state: JobState,
    pub scenario: Scenario,
    pub progress: f64,
    pub result: Option<Arc<SimulationResult>>,
    pub error: Option<String>,
}

struct StoreInner {
    jobs: HashMap<Uuid, JobRecord>,
    /// Least recently used first.
    order: VecDeque<Uuid>,
}

/// Job records guarded by one lock. Lookups return snapshots.
pub struct JobStore {
    inner: Mutex<StoreInner>,
    capacity: usize,
}

impl JobStore {
    pub fn new(capacity: usize) -> Self {
        Self {
            inner: Mutex::new(StoreInner {
                jobs: HashMap::new(),
                order: VecDeque::new(),
            }),
            capacity: capacity.max(1),
        }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, StoreInner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn touch(inner: &mut StoreInner, id: Uuid) {
        if let Some(pos) = inner.order.iter().position(|&x| x == id) {
            inner.order.remove(pos);
        }
        inner.order.push_back(id);
    }

    fn insert(&self, record: JobRecord) {
        let mut inner = self.lock();
        let id = record.id;
        inner.jobs.insert(id, record);
        Self::touch(&mut inner, id);
        self.evict(&mut inner);
    }

    fn remove(&self, id: Uuid) {
        let mut inner = self.lock();
        inner.jobs.remove(&id);
        inner.order.retain(|&x| x != id);
    }

    fn evict(&self, inner: &mut StoreInner) {
        while inner.jobs.len() > self.capacity {
            let victim = inner
                .order
                .iter()
                .position(|id| inner.jobs.get(id).is_some_and(|j| j.state.finished()));
            match victim {
                Some(pos) => {
                    let id = inner.order.remove(pos).expect("position is in range");
                    inner.jobs.remove(&id);
                }
                None => break,
            }
        }
    }

    pub fn get(&self, id: Uuid) -> Option<JobRecord> {
        let mut inner = self.lock();
        let record = inner.jobs.get(&id).cloned()?;
        Self::touch(&mut inner, id);
        Some(record)
    }

    fn update(&self, id: Uuid, f: impl FnOnce(&mut JobRecord)) {
        let mut inner = self.lock();
        if let Some(record) = inner.jobs.get_mut(&id) {
            f(record);
        }
        if inner.jobs.get(&id).is_some_and(|j| j.state.finished()) {
            self.evict(&mut inner);
        }
    }

    pub fn len(&self) -> usize {
        self.lock().jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn count(&self, state: JobState) -> usize {
        self.lock()
            .jobs
            .values()
            .filter(|j| j.state == state)
            .count()
    }
}

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<JobStore>,
    queue: mpsc::Sender<Uuid>,
    config: Arc<ServiceConfig>,
}

impl AppState {
    /// Creates the store and starts the workers. Must be called inside a
    /// tokio runtime.
    pub fn start(config: ServiceConfig) -> Self {
        let store = Arc::new(JobStore::new(config.store_capacity));
        let (tx, rx) = mpsc::channel(config.queue_capacity.max(1));
        let rx = Arc::new(tokio::sync::Mutex::new(rx));
        let config = Arc::new(config);
        for _ in 0..config.workers.max(1) {
            let rx = rx.clone();
            let store = store.clone();
            let config = config.clone();
            tokio::spawn(async move {
                loop {
                    let next = rx.lock().await.recv().await;
                    let Some(id) = next else { break };
                    let store = store.clone();
                    let config = config.clone();
                    let _ = tokio::task::spawn_blocking(move || execute(&store, &config, id)).await;
                }
            });
        }
        Self {
            store,
            queue: tx,
            config,
        }
    }
}

fn execute(store: &JobStore, config: &ServiceConfig, id: Uuid) {
    let Some(record) = store.get(id) else { return };
    store.update(id, |r| r.state = JobState::Running);
    let mut report = |done: usize, total: usize| {
        let fraction = if total == 0 {
            1.0
        } else {
            done as f64 / total as f64
        };
        store.update(id, |r| r.progress = r.progress.max(fraction.min(1.0)));
    };
    match run_with_progress(&record.scenario, config.run_options, &mut report) {
        Ok(result) => {
            if let Some(dir) = &config.results_dir {
                if let Err(e) = flexsim::export_result(
                    &result,
                    dir.join(id.to_string()),
                    flexsim::ExportFormats::BIN,
                ) {
                    tracing::warn!(%id, "bundle write-through failed: {e}");
                }
            }
            let result = Arc::new(result);
            store.update(id, |r| {
                r.progress = 1.0;
                r.result = Some(result);
                r.state = JobState::Done;
            });
        }
        Err(e) => store.update(id, |r| {
            r.error = Some(e.to_string());
            r.state = JobState::Failed;
        }),
    }
}

pub fn router(state: AppState) -> Router {
    let static_dir = state.config.static_dir.clone();
    let api = Router::new()
        .route("/api/jobs", post(post_job))
        .route("/api/jobs/{id}", get(get_job))
        .route("/api/jobs/{id}/fields/{name}", get(get_field))
        .route("/api/jobs/{id}/tip", get(get_tip))
        .route("/api/models", get(get_models))
        .route("/api/health", get(get_health))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// An error response with a JSON body `{"error": kind, "message": ..., "errors": [...]}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
    errors: Vec<FieldError>,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            kind,
            message: message.into(),
            errors: Vec::new(),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (kind, errors) = match e {
            Error::Invalid(errors) => ("validation", errors),
            Error::UnknownKey { path, message } => {
                ("unknown_key", vec![FieldError::new(path, message)])
            }
            Error::Parse { path, message } => ("parse", vec![FieldError::new(path, message)]),
            Error::SchemaVersion { .. } => (
                "schema_version",
                vec![FieldError::new("schema_version", message.clone())],
            ),
            _ => ("invalid", Vec::new()),
        };
        Self {
            status: StatusCode::BAD_REQUEST,
            kind,
            message,
            errors,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.kind, "message": self.message, "errors": self.errors });
        let mut response = (self.status, Json(body)).into_response();
        if self.status == StatusCode::SERVICE_UNAVAILABLE {
            response
                .headers_mut()
                .insert(header::RETRY_AFTER, HeaderValue::from_static("1"));
        }
        response
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

/// Parses a submitted scenario document: JSON unless the content type says
/// TOML.
pub fn parse_document(headers: &HeaderMap, body: &[u8]) -> std::result::Result<Scenario, Error> {
    let text = std::str::from_utf8(body).map_err(|e| Error::Parse {
        path: String::new(),
        message: e.to_string(),
    })?;
    let content_type = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .unwrap_or("");
    if content_type.contains("toml") {
        parse_scenario_toml(text)
    } else {
        parse_scenario_json(text)
    }
}

async fn post_job(
    State(state): State<AppState>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult<Response> {
    let scenario = parse_document(&headers, &body)?;
    let id = Uuid::new_v4();
    state.store.insert(JobRecord {
        id,
        state: JobState::Queued,
        scenario,
        progress: 0.0,
        result: None,
        error: None,
    });
    if state.queue.try_send(id).is_err() {
        state.store.remove(id);
        return Err(ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "queue_full",
            "job queue is full, retry later",
        ));
    }
    let body = json!({ "job_id": id, "state": JobState::Queued });
    let mut response = (StatusCode::ACCEPTED, Json(body)).into_response();
    if let Ok(v) = HeaderValue::from_str(&format!("/api/jobs/{id}")) {
        response.headers_mut().insert(header::LOCATION, v);
    }
    Ok(response)
}

fn lookup(state: &AppState, id: &str) -> ApiResult<JobRecord> {
    let id = Uuid::parse_str(id).map_err(|_| ApiError::not_found(format!("no job {id}")))?;
    state
        .store
        .get(id)
        .ok_or_else(|| ApiError::not_found(format!("no job {id}")))
}

fn summary(result: &SimulationResult) -> Value {
    json!({
        "verdict": result.verdict,
        "steps_completed": result.steps_completed,
        "tip_final": result.tip.final_w(),
        "tip_tail_mean_abs": result.tip.window_mean_abs(0.1),
        "wall_time_s": result.wall_time.as_secs_f64(),
        "a_priori": result.a_priori,
        "h": result.mesh.h,
        "k": result.mesh.k,
        "fields": field_names(result),
    })
}

fn field_names(result: &SimulationResult) -> Vec<&'static str> {
    match &result.history {
        Some(h) if h.phi().is_some() => vec!["w", "phi"],
        Some(_) => vec!["w"],
        None => Vec::new(),
    }
}

async fn get_job(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let job = lookup(&state, &id)?;
    let mut body = json!({
        "job_id": job.id,
        "state": job.state,
        "progress": job.progress,
        "label": job.scenario.label,
        "model": job.scenario.model.kind(),
        "controller": job.scenario.controller.kind,
    });
    if let Some(result) = &job.result {
        body["summary"] = summary(result);
    }
    if let Some(e) = &job.error {
        body["error"] = json!(e);
    }
    Ok(Json(body))
}

fn finished_result(job: &JobRecord) -> ApiResult<Arc<SimulationResult>> {
    job.result.clone().ok_or_else(|| {
        ApiError::new(
            StatusCode::CONFLICT,
            "not_done",
            format!("job {} is {:?}", job.id, job.state).to_lowercase(),
        )
    })
}

#[derive(Debug, Deserialize)]
pub struct FieldQuery {
    #[serde(default = "one")]
    pub stride: usize,
    #[serde(default)]
    pub format: Option<String>,
}

fn one() -> usize {
    1
}

/// Indices `0, stride, 2 stride, ...` below `n`.
pub fn stride_rows(n: usize, stride: usize) -> Vec<usize> {
    (0..n).step_by(stride.max(1)).collect()
}

async fn get_field(
    State(state): State<AppState>,
    Path((id, name)): Path<(String, String)>,
    Query(q): Query<FieldQuery>,
) -> ApiResult<Response> {
    let job = lookup(&state, &id)?;
    if q.stride == 0 {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "stride",
            "stride must be at least 1",
        ));
    }
    let result = finished_result(&job)?;
    let history = result
        .history
        .as_ref()
        .ok_or_else(|| ApiError::not_found("job kept no field history (rolling storage)"))?;
    let grid = match name.as_str() {
        "w" => history.w(),
        "phi" => history.phi().ok_or_else(|| {
            ApiError::not_found(format!("{} has no field phi", job.scenario.model.kind()))
        })?,
        other => return Err(ApiError::not_found(format!("unknown field {other}"))),
    };
    let cols = history.n_nodes();
    let rows = stride_rows(history.n_levels(), q.stride);
    let t: Vec<f64> = rows.iter().map(|&j| result.tip.t[j]).collect();
    match q.format.as_deref() {
        None | Some("json") => {
            let x: Vec<f64> = (0..cols)
                .map(|i| result.mesh.node_position(i).unwrap_or(f64::NAN))
                .collect();
            let values: Vec<&[f64]> = rows
                .iter()
                .map(|&j| &grid[j * cols..(j + 1) * cols])
                .collect();
            Ok(Json(json!({
                "field": name,
                "stride": q.stride,
                "shape": [rows.len(), cols],
                "t": t,
                "x": x,
                "values": values,
            }))
            .into_response())
        }
        Some("bin") => {
            let mut bytes = Vec::with_capacity(16 + 8 * rows.len() * (cols + 1));
            bytes.extend_from_slice(&(rows.len() as u64).to_le_bytes());
            bytes.extend_from_slice(&(cols as u64).to_le_bytes());
            for v in &t {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            for &j in &rows {
                for v in &grid[j * cols..(j + 1) * cols] {
                    bytes.extend_from_slice(&v.to_le_bytes());
                }
            }
            let headers = [
                (header::CONTENT_TYPE, "application/octet-stream".to_string()),
                (
                    header::HeaderName::from_static("x-grid-shape"),
                    format!("{},{}", rows.len(), cols),
                ),
            ];
            Ok((headers, bytes).into_response())
        }
        Some(other) => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "format",
            format!("unknown format {other}, expected json or bin"),
        )),
    }
}

async fn get_tip(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<FieldQuery>,
) -> ApiResult<Json<Value>> {
    let job = lookup(&state, &id)?;
    if q.stride == 0 {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "stride",
            "stride must be at least 1",
        ));
    }
    let result = finished_result(&job)?;
    let rows = stride_rows(result.tip.len(), q.stride);
    let pick = |v: &[f64]| rows.iter().map(|&j| v[j]).collect::<Vec<f64>>();
    let mut body = json!({
        "stride": q.stride,
        "t": pick(&result.tip.t),
        "w": pick(&result.tip.w),
    });
    if let Some(phi) = &result.tip.phi {
        body["phi"] = json!(pick(phi));
    }
    Ok(Json(body))
}

async fn get_models() -> Json<flexsim::Catalog> {
    Json(flexsim::list_models())
}

async fn get_health(State(state): State<AppState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "version": env!("CARGO_PKG_VERSION"),
        "workers": state.config.workers,
        "queued": state.store.count(JobState::Queued),
        "running": state.store.count(JobState::Running),
    }))
}

/// Port from `PLATFORM_PORT` when set and valid, else `flag`.
pub fn resolve_port(flag: u16, env: Option<&str>) -> u16 {
    env.and_then(|v| v.trim().parse().ok()).unwrap_or(flag)
}

pub async fn serve(config: ServiceConfig, port: u16) -> std::io::Result<()> {
    let state = AppState::start(config);
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
