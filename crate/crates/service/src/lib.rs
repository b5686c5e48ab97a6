//! JSON-over-HTTP facade over the diagram engine, with per-session history
//! trees for interactive untangling.

use std::collections::HashMap;
use std::convert::Infallible;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use axum::extract::{Path, State as Extract};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::Stream;
use periodica::render::{render_svg, render_tridiagram_svg, RenderStyle};
use periodica::search::{simplify, Progress, Search};
use periodica::{enumerate_moves, MoveApplication, NodeId, SimplifyBudget, Tridiagram};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::{mpsc, Mutex, RwLock};
use tower_http::cors::CorsLayer;

pub mod session;

use session::{Operation, Session, Snapshot, Summary};

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(json!({ "error": self.to_string() }))).into_response()
    }
}

impl From<periodica::Error> for ApiError {
    fn from(e: periodica::Error) -> Self {
        use periodica::Error as E;
        match e {
            E::NotApplicable(_) | E::NotACrossing(_) => ApiError::Conflict(e.to_string()),
            E::Budget(_) => ApiError::Unprocessable(e.to_string()),
            E::Syntax { .. } | E::Structure(_) => ApiError::BadRequest(e.to_string()),
            _ => ApiError::Internal(e.to_string()),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Server state: sessions behind per-session locks, so requests on
/// different sessions never wait on each other.
#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<u64, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
    snapshots: Option<PathBuf>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Persists every session as JSON under `dir` and reloads those found
    /// there.
    pub fn with_snapshots(dir: PathBuf) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        let mut next = 0;
        let mut files: Vec<_> = std::fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for p in files {
            let text = std::fs::read_to_string(&p)?;
            let restored = serde_json::from_str::<Snapshot>(&text)
                .map_err(|e| e.to_string())
                .and_then(|s| Session::restore(&s).map_err(|e| e.to_string()));
            match restored {
                Ok(s) => {
                    next = next.max(s.id + 1);
                    sessions.insert(s.id, Arc::new(Mutex::new(s)));
                }
                Err(e) => eprintln!("skipping snapshot {}: {e}", p.display()),
            }
        }
        Ok(AppState {
            sessions: RwLock::new(sessions),
            next_id: AtomicU64::new(next),
            snapshots: Some(dir),
        })
    }

    async fn session(&self, id: u64) -> ApiResult<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .await
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(format!("no session {id}")))
    }

    fn persist(&self, s: &Session) -> ApiResult<()> {
        let Some(dir) = &self.snapshots else {
            return Ok(());
        };
        let path = dir.join(format!("session-{:08}.json", s.id));
        let text =
            serde_json::to_string(&s.snapshot()).map_err(|e| ApiError::Internal(e.to_string()))?;
        std::fs::write(&path, text)
            .map_err(|e| ApiError::Internal(format!("{}: {e}", path.display())))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}/tree", get(tree))
        .route("/session/{id}/state/{sid}", get(get_state))
        .route("/session/{id}/state/{sid}/svg", get(get_svg))
        .route("/session/{id}/state/{sid}/moves", get(moves))
        .route("/session/{id}/state/{sid}/apply", post(apply))
        .route("/session/{id}/state/{sid}/untangle", post(untangle))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

#[derive(Deserialize)]
struct CreateBody {
    pdg: String,
}

#[derive(Serialize)]
struct Created {
    session_id: u64,
    state_id: usize,
    summary: Summary,
}

async fn create_session(
    Extract(app): Extract<Arc<AppState>>,
    body: Result<Json<CreateBody>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<Json<Created>> {
    let Json(body) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    let id = app.next_id.fetch_add(1, Ordering::Relaxed);
    let s = Session::new(id, &body.pdg).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let summary = s.states[0].summary()?;
    app.persist(&s)?;
    app.sessions
        .write()
        .await
        .insert(id, Arc::new(Mutex::new(s)));
    Ok(Json(Created {
        session_id: id,
        state_id: 0,
        summary,
    }))
}

fn missing_state(sid: usize) -> ApiError {
    ApiError::NotFound(format!("no state {sid}"))
}

async fn tree(Extract(app): Extract<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<Json<Value>> {
    let s = app.session(id).await?;
    let s = s.lock().await;
    let states = s
        .states
        .iter()
        .map(|st| {
            Ok(json!({
                "id": st.id,
                "parent": st.parent,
                "op": st.op,
                "summary": st.summary()?,
            }))
        })
        .collect::<ApiResult<Vec<_>>>()?;
    Ok(Json(json!({ "session_id": id, "states": states })))
}

async fn get_state(
    Extract(app): Extract<Arc<AppState>>,
    Path((id, sid)): Path<(u64, usize)>,
) -> ApiResult<Json<Value>> {
    let s = app.session(id).await?;
    let s = s.lock().await;
    let st = s.state(sid).ok_or_else(|| missing_state(sid))?;
    Ok(Json(json!({
        "state_id": sid,
        "parent": st.parent,
        "op": st.op,
        "summary": st.summary()?,
        "pdg": st.pdg(),
    })))
}

async fn get_svg(
    Extract(app): Extract<Arc<AppState>>,
    Path((id, sid)): Path<(u64, usize)>,
) -> ApiResult<Response> {
    let s = app.session(id).await?;
    let s = s.lock().await;
    let st = s.state(sid).ok_or_else(|| missing_state(sid))?;
    let style = RenderStyle::default();
    let svg = match st.diagrams.as_slice() {
        [d] => render_svg(d, &style)?,
        [a, b, c] => {
            render_tridiagram_svg(&Tridiagram::new([a.clone(), b.clone(), c.clone()]), &style)?
        }
        _ => unreachable!("states hold one or three diagrams"),
    };
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

#[derive(Deserialize)]
struct DiagramQuery {
    #[serde(default)]
    diagram: usize,
}

#[derive(Serialize)]
struct Listed {
    /// Position in the enumeration; stable for a given state.
    index: usize,
    #[serde(flatten)]
    mv: MoveApplication,
}

async fn moves(
    Extract(app): Extract<Arc<AppState>>,
    Path((id, sid)): Path<(u64, usize)>,
    axum::extract::Query(q): axum::extract::Query<DiagramQuery>,
) -> ApiResult<Json<Vec<Listed>>> {
    let s = app.session(id).await?;
    let d = {
        let s = s.lock().await;
        let st = s.state(sid).ok_or_else(|| missing_state(sid))?;
        st.diagram(q.diagram)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(format!("no diagram {}", q.diagram)))?
    };
    let list = tokio::task::spawn_blocking(move || enumerate_moves(&d))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(Json(
        list.into_iter()
            .enumerate()
            .map(|(index, mv)| Listed { index, mv })
            .collect(),
    ))
}

#[derive(Deserialize)]
struct ApplyBody {
    #[serde(default)]
    diagram: usize,
    #[serde(default, rename = "move")]
    mv: Option<MoveApplication>,
    #[serde(default)]
    change: Option<NodeId>,
}

async fn apply(
    Extract(app): Extract<Arc<AppState>>,
    Path((id, sid)): Path<(u64, usize)>,
    body: Result<Json<ApplyBody>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<Json<Value>> {
    let Json(body) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    let op = match (body.mv, body.change) {
        (Some(mv), None) => Operation::Move {
            diagram: body.diagram,
            mv,
        },
        (None, Some(crossing)) => Operation::Change {
            diagram: body.diagram,
            crossing,
        },
        _ => {
            return Err(ApiError::BadRequest(
                "give exactly one of `move` and `change`".into(),
            ))
        }
    };
    let s = app.session(id).await?;
    let mut s = s.lock().await;
    if s.state(sid).is_none() {
        return Err(missing_state(sid));
    }
    let child = s.apply(sid, op)?;
    app.persist(&s)?;
    let st = &s.states[child];
    let summary = st.summary()?;
    let hint = hint(&st.diagrams)?;
    Ok(Json(json!({
        "state_id": child,
        "parent": sid,
        "op": st.op,
        "summary": summary,
        "pdg": st.pdg(),
        "hint": hint,
    })))
}

/// Greedy simplification only: a quick ground-state hint, not a verdict.
fn hint(diagrams: &[periodica::SquareDiagram]) -> ApiResult<Value> {
    let b = SimplifyBudget::greedy();
    let counts = diagrams
        .iter()
        .map(|d| simplify(d, &b).map(|s| s.crossing_count()))
        .collect::<periodica::Result<Vec<_>>>()?;
    let text = if counts.iter().all(|&c| c == 0) {
        "simplifies to 0".to_string()
    } else {
        format!("simplifies to {counts:?}")
    };
    Ok(json!({ "simplified_crossings": counts, "text": text }))
}

#[derive(Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Method {
    #[default]
    Bfs,
    Fixed,
}

#[derive(Deserialize)]
struct UntangleBody {
    #[serde(default)]
    diagram: usize,
    #[serde(default)]
    method: Method,
    #[serde(default = "default_changes")]
    max_changes: usize,
    #[serde(default)]
    budget: SimplifyBudget,
}

fn default_changes() -> usize {
    2
}

/// Sets the flag when dropped, so an abandoned request stops its search.
struct CancelOnDrop(Arc<AtomicBool>);

impl Drop for CancelOnDrop {
    fn drop(&mut self) {
        self.0.store(true, Ordering::Relaxed);
    }
}

async fn untangle(
    Extract(app): Extract<Arc<AppState>>,
    Path((id, sid)): Path<(u64, usize)>,
    headers: HeaderMap,
    body: Result<Json<UntangleBody>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<Response> {
    let Json(body) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    let s = app.session(id).await?;
    let d = {
        let s = s.lock().await;
        let st = s.state(sid).ok_or_else(|| missing_state(sid))?;
        st.diagram(body.diagram)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(format!("no diagram {}", body.diagram)))?
    };
    let stream = headers
        .get(header::ACCEPT)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.contains("text/event-stream"));
    let cancel = Arc::new(AtomicBool::new(false));
    let (tx, rx) = mpsc::unbounded_channel::<Progress>();
    let search = Search::new(&body.budget).with_cancel(cancel.clone());
    let search = if stream {
        search.with_progress(move |p| {
            let _ = tx.send(p.clone());
        })
    } else {
        search
    };
    let (method, k) = (body.method, body.max_changes);
    let job = tokio::task::spawn_blocking(move || match method {
        Method::Bfs => search.untangle_bfs(&d, k),
        Method::Fixed => search.untangle_fixed_shadow(&d),
    });
    let guard = CancelOnDrop(cancel);
    if !stream {
        let r = job.await.map_err(|e| ApiError::Internal(e.to_string()))??;
        drop(guard);
        return Ok(Json(r).into_response());
    }
    Ok(Sse::new(events(rx, job, guard))
        .keep_alive(KeepAlive::default())
        .into_response())
}

type Job = tokio::task::JoinHandle<periodica::Result<periodica::UntanglingResult>>;

/// `progress` events while the search runs, then one `result` or `error`.
fn events(
    rx: mpsc::UnboundedReceiver<Progress>,
    job: Job,
    guard: CancelOnDrop,
) -> impl Stream<Item = Result<Event, Infallible>> {
    futures::stream::unfold(Some((rx, job, guard)), |st| async move {
        let (mut rx, job, guard) = st?;
        if let Some(p) = rx.recv().await {
            let ev = Event::default()
                .event("progress")
                .json_data(p)
                .expect("serialisable");
            return Some((Ok(ev), Some((rx, job, guard))));
        }
        // The sender is dropped with the search, so the job has finished.
        let ev = match job.await {
            Ok(Ok(r)) => Event::default()
                .event("result")
                .json_data(r)
                .expect("serialisable"),
            Ok(Err(e)) => {
                let e = ApiError::from(e);
                Event::default()
                    .event("error")
                    .json_data(json!({ "status": e.status().as_u16(), "error": e.to_string() }))
                    .expect("serialisable")
            }
            Err(e) => Event::default()
                .event("error")
                .json_data(json!({ "status": 500, "error": e.to_string() }))
                .expect("serialisable"),
        };
        drop(guard);
        Some((Ok(ev), None))
    })
}
