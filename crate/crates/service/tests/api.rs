use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use periodica_service::{router, AppState};
use serde_json::{json, Value};
use tower::ServiceExt;

const THREAD: &str = "pdg 1\nP L 0 a\nP R 0 b\nA a b\n";

fn fixture(name: &str) -> String {
    let p = format!(
        "{}/../core/data/diagrams/{name}.pdg",
        env!("CARGO_MANIFEST_DIR")
    );
    std::fs::read_to_string(p).unwrap()
}

fn app() -> Router {
    router(Arc::new(AppState::new()))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, v)
}

async fn session(app: &Router, pdg: &str) -> u64 {
    let (s, v) = call(app, "POST", "/session", Some(json!({ "pdg": pdg }))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    v["session_id"].as_u64().unwrap()
}

#[tokio::test]
async fn sessions_are_created_from_valid_documents() {
    let app = app();
    let (s, v) = call(&app, "POST", "/session", Some(json!({ "pdg": "pdg 1\n" }))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["state_id"], 0);
    assert_eq!(v["summary"]["triplet"]["c_value"], 0);

    let (s, _) = call(
        &app,
        "POST",
        "/session",
        Some(json!({ "pdg": "not a diagram" })),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = call(&app, "POST", "/session", Some(json!({ "text": 1 }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = call(&app, "GET", "/session/99/tree", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn moves_are_listed_deterministically() {
    let app = app();
    let id = session(&app, &fixture("curl")).await;
    let uri = format!("/session/{id}/state/0/moves");
    let (s, first) = call(&app, "GET", &uri, None).await;
    assert_eq!(s, StatusCode::OK);
    let list = first.as_array().unwrap();
    assert!(list.iter().any(|m| m["kind"] == "R1"));
    let (_, second) = call(&app, "GET", &uri, None).await;
    assert_eq!(first, second);

    let empty = session(&app, "pdg 1\n").await;
    let (_, v) = call(
        &app,
        "GET",
        &format!("/session/{empty}/state/0/moves"),
        None,
    )
    .await;
    assert_eq!(v, json!([]));
    let (s, _) = call(&app, "GET", &format!("/session/{id}/state/7/moves"), None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn applying_builds_a_consistent_tree() {
    let app = app();
    let id = session(&app, &fixture("hopf")).await;
    let base = format!("/session/{id}/state");
    let (_, root) = call(&app, "GET", &format!("{base}/0"), None).await;

    let (s, one) = call(
        &app,
        "POST",
        &format!("{base}/0/apply"),
        Some(json!({ "change": 0 })),
    )
    .await;
    assert_eq!(s, StatusCode::OK, "{one}");
    assert_eq!(one["state_id"], 1);
    assert_eq!(one["hint"]["text"], "simplifies to 0");

    let (_, two) = call(
        &app,
        "POST",
        &format!("{base}/1/apply"),
        Some(json!({ "change": 0 })),
    )
    .await;
    assert_eq!(two["summary"]["codes"], root["summary"]["codes"]);

    let (s, _) = call(
        &app,
        "POST",
        &format!("{base}/0/apply"),
        Some(json!({ "change": 9 })),
    )
    .await;
    assert_eq!(s, StatusCode::CONFLICT);

    let (_, tree) = call(&app, "GET", &format!("/session/{id}/tree"), None).await;
    let states = tree["states"].as_array().unwrap();
    assert_eq!(states.len(), 3);
    assert_eq!(states[2]["parent"], 1);
    assert_eq!(states[2]["op"]["change"]["crossing"], 0);

    // Backward R2 creates a bigon: two more crossings.
    let (_, moves) = call(&app, "GET", &format!("{base}/0/moves"), None).await;
    let r2 = moves
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["kind"] == "R2" && m["direction"] == "backward")
        .expect("an R2 creation site")
        .clone();
    let (s, v) = call(
        &app,
        "POST",
        &format!("{base}/0/apply"),
        Some(json!({ "move": r2 })),
    )
    .await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["summary"]["crossings"][0], 4);
    assert_eq!(v["parent"], 0);
}

#[tokio::test]
async fn every_tree_edge_replays_through_the_library() {
    let app = app();
    let id = session(&app, &fixture("curl")).await;
    let base = format!("/session/{id}/state");
    let (_, moves) = call(&app, "GET", &format!("{base}/0/moves"), None).await;
    for m in moves.as_array().unwrap().iter().take(4) {
        let (s, _) = call(
            &app,
            "POST",
            &format!("{base}/0/apply"),
            Some(json!({ "move": m })),
        )
        .await;
        assert_eq!(s, StatusCode::OK);
    }
    let (_, tree) = call(&app, "GET", &format!("/session/{id}/tree"), None).await;
    for st in tree["states"].as_array().unwrap().iter().skip(1) {
        let sid = st["id"].as_u64().unwrap();
        let parent = st["parent"].as_u64().unwrap();
        let (_, p) = call(&app, "GET", &format!("{base}/{parent}"), None).await;
        let (_, c) = call(&app, "GET", &format!("{base}/{sid}"), None).await;
        let pd = periodica::parse_diagram(p["pdg"].as_str().unwrap()).unwrap();
        let mv: periodica::MoveApplication =
            serde_json::from_value(st["op"]["move"]["move"].clone()).unwrap();
        let expect = periodica::apply_move(&pd, &mv).unwrap();
        assert_eq!(
            periodica::canonical_code(&expect).unwrap().to_hex(),
            c["summary"]["codes"][0].as_str().unwrap()
        );
    }
}

#[tokio::test]
async fn untangle_matches_the_library_and_guards_budgets() {
    let app = app();
    let id = session(&app, &fixture("hopf")).await;
    let uri = format!("/session/{id}/state/0/untangle");
    let (s, v) = call(&app, "POST", &uri, Some(json!({ "max_changes": 2 }))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["u_upper"], 1);
    let d = periodica::parse_diagram(&fixture("hopf")).unwrap();
    let lib = periodica::search::untangle_bfs(&d, 2, &Default::default()).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());
    let (_, again) = call(&app, "POST", &uri, Some(json!({ "max_changes": 2 }))).await;
    assert_eq!(again, v);

    let body = json!({ "method": "fixed", "budget": { "max_states": 2 } });
    let (s, _) = call(&app, "POST", &uri, Some(body)).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);

    let zero = session(&app, THREAD).await;
    let (_, v) = call(
        &app,
        "POST",
        &format!("/session/{zero}/state/0/untangle"),
        Some(json!({})),
    )
    .await;
    assert_eq!(v["u_upper"], 0);
}

#[tokio::test]
async fn untangle_streams_progress_events() {
    let app = app();
    let id = session(&app, &fixture("hopf")).await;
    let req = Request::builder()
        .method("POST")
        .uri(format!("/session/{id}/state/0/untangle"))
        .header(header::CONTENT_TYPE, "application/json")
        .header(header::ACCEPT, "text/event-stream")
        .body(Body::from(json!({ "max_changes": 2 }).to_string()))
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let text = String::from_utf8(
        resp.into_body()
            .collect()
            .await
            .unwrap()
            .to_bytes()
            .to_vec(),
    )
    .unwrap();
    assert!(text.contains("event: progress"), "{text}");
    let result = text
        .split("event: result\ndata: ")
        .nth(1)
        .and_then(|r| r.lines().next())
        .expect("result event");
    let v: Value = serde_json::from_str(result).unwrap();
    assert_eq!(v["u_upper"], 1);
}

#[tokio::test]
async fn svg_and_cors() {
    let app = app();
    let id = session(&app, &fixture("hopf")).await;
    let req = Request::builder()
        .uri(format!("/session/{id}/state/0/svg"))
        .header(header::ORIGIN, "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert!(resp
        .headers()
        .contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
    assert_eq!(resp.headers()[header::CONTENT_TYPE], "image/svg+xml");
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    assert!(body.starts_with(b"<svg"));
}

#[tokio::test]
async fn snapshots_restore_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let first = router(Arc::new(
        AppState::with_snapshots(dir.path().into()).unwrap(),
    ));
    let id = session(&first, &fixture("hopf")).await;
    let base = format!("/session/{id}/state");
    call(
        &first,
        "POST",
        &format!("{base}/0/apply"),
        Some(json!({ "change": 1 })),
    )
    .await;
    let (_, before) = call(&first, "GET", &format!("/session/{id}/tree"), None).await;

    let second = router(Arc::new(
        AppState::with_snapshots(dir.path().into()).unwrap(),
    ));
    let (_, after) = call(&second, "GET", &format!("/session/{id}/tree"), None).await;
    assert_eq!(before, after);
    let next = session(&second, THREAD).await;
    assert_ne!(next, id);
}
