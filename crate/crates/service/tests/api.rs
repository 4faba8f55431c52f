use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use firebreak_core::play::play;
use firebreak_core::strategies::Scripted;
use firebreak_core::trace::{validate_jsonl, Trace};
use firebreak_core::{BudgetSchedule, GraphSpec, VertexId};
use firebreak_service::{router, AppState, ServiceConfig, Status, View};
use http_body_util::BodyExt;
use proptest::prelude::*;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(
    app: &Router,
    method: Method,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (
        status,
        resp.into_body()
            .collect()
            .await
            .unwrap()
            .to_bytes()
            .to_vec(),
    )
}

async fn call_json(
    app: &Router,
    method: Method,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Value) {
    let (s, bytes) = call(app, method, uri, body).await;
    (s, serde_json::from_slice(&bytes).unwrap())
}

async fn create(app: &Router, body: Value) -> (String, View) {
    let (s, v) = call_json(app, Method::POST, "/v1/sessions", Some(body)).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    (
        v["id"].as_str().unwrap().to_string(),
        serde_json::from_value(v["view"].clone()).unwrap(),
    )
}

async fn view(app: &Router, id: &str) -> View {
    let (s, v) = call_json(app, Method::GET, &format!("/v1/sessions/{id}/view"), None).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    serde_json::from_value(v).unwrap()
}

async fn protect(
    app: &Router,
    id: &str,
    vertices: &[VertexId],
    revoke: bool,
) -> (StatusCode, Value) {
    call_json(
        app,
        Method::POST,
        &format!("/v1/sessions/{id}/protect"),
        Some(json!({ "vertices": vertices, "revoke": revoke })),
    )
    .await
}

fn ids_with(view: &View, pred: impl Fn(&firebreak_service::ViewVertex) -> bool) -> Vec<VertexId> {
    view.vertices
        .iter()
        .filter(|v| pred(v))
        .map(|v| v.id.clone())
        .collect()
}

fn app() -> Router {
    router(AppState::new(ServiceConfig::default()))
}

#[tokio::test]
async fn z2_session_starts_with_one_burning_vertex_and_budget_two() {
    let app = app();
    let (_, v) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 2 }, "schedule": { "c": 2, "d": 0 } }),
    )
    .await;
    assert_eq!(ids_with(&v, |x| x.status == Status::Burning).len(), 1);
    assert_eq!(v.budget, 2);
    assert_eq!(v.time, 0);
    assert!(!v.contained);
    // Radius-3 diamond around one vertex: 2*9 + 2*3 + 1 vertices.
    assert_eq!(v.vertices.len(), 25);
}

#[tokio::test]
async fn over_budget_protection_is_rejected_without_changing_state() {
    let app = app();
    let (id, before) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 2 }, "schedule": { "c": 2, "d": 0 } }),
    )
    .await;
    let near = ids_with(&before, |x| x.distance == 1);
    let (s, err) = protect(&app, &id, &near[..3], false).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"]["code"], "budget-exceeded");
    assert_eq!(view(&app, &id).await, before);

    let (s, _) = protect(&app, &id, &near[..2], false).await;
    assert_eq!(s, StatusCode::OK);
    let (s, err) = protect(&app, &id, &near[2..3], false).await;
    assert_eq!(err["error"]["code"], "budget-exceeded", "{s}");
    assert_eq!(view(&app, &id).await.pending, near[..2].to_vec());
}

#[tokio::test]
async fn grid1_containment_matches_the_engine() {
    let app = app();
    let (id, v) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 1 }, "schedule": { "c": 2, "d": 0 } }),
    )
    .await;
    let ends = ids_with(&v, |x| x.distance == 1);
    assert_eq!(ends.len(), 2);
    let (s, _) = protect(&app, &id, &ends, false).await;
    assert_eq!(s, StatusCode::OK);
    let (s, after) = call_json(&app, Method::POST, &format!("/v1/sessions/{id}/step"), None).await;
    assert_eq!(s, StatusCode::OK);
    let after: View = serde_json::from_value(after).unwrap();
    assert!(after.contained);
    assert_eq!(after.contained_at, Some(1));
    assert_eq!(after.fire_size, 1);

    let (s, err) = call_json(&app, Method::POST, &format!("/v1/sessions/{id}/step"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(err["error"]["code"], "game-over");

    let g = GraphSpec::Grid { dim: 1 }.build().unwrap();
    let mut scripted = Scripted::new(vec![ends]);
    let report = play(
        &*g,
        &[g.basepoint()],
        BudgetSchedule::constant(2),
        &mut scripted,
        1,
    )
    .unwrap();
    assert_eq!(report.contained_at, after.contained_at);
    assert_eq!(report.final_fire_size, after.fire_size);
}

#[tokio::test]
async fn illegal_vertices_report_codes_and_ids() {
    let app = app();
    let (id, v) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 2 }, "schedule": { "c": 2, "d": 0 } }),
    )
    .await;
    let burning = ids_with(&v, |x| x.status == Status::Burning);
    let (s, err) = protect(&app, &id, &burning, false).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"]["code"], "protecting-burning-vertex");
    assert_eq!(err["error"]["vertices"], json!([burning[0].as_str()]));

    let (_, err) = call_json(
        &app,
        Method::POST,
        &format!("/v1/sessions/{id}/protect"),
        Some(json!({ "vertices": ["not a vertex"] })),
    )
    .await;
    assert_eq!(err["error"]["code"], "unknown-vertex");
    assert_eq!(err["error"]["vertices"], json!(["not a vertex"]));

    let near = ids_with(&v, |x| x.distance == 1);
    let (_, err) = protect(&app, &id, &near[..1], true).await;
    assert_eq!(err["error"]["code"], "not-pending");
    assert_eq!(view(&app, &id).await, v);
}

#[tokio::test]
async fn pending_protections_can_be_revoked_before_the_step() {
    let app = app();
    let (id, v) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 2 }, "schedule": { "c": 2, "d": 0 } }),
    )
    .await;
    let near = ids_with(&v, |x| x.distance == 1);
    protect(&app, &id, &near[..2], false).await;
    let (s, body) = protect(&app, &id, &near[..1], true).await;
    assert_eq!(s, StatusCode::OK);
    let after: View = serde_json::from_value(body).unwrap();
    assert_eq!(after.pending, near[1..2].to_vec());
    assert!(after.vertices.iter().any(|x| x.id == near[1] && x.pending));
}

#[tokio::test]
async fn request_errors_are_structured() {
    let app = app();
    let (s, err) = call_json(&app, Method::GET, "/v1/sessions/nope/view", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(err["error"]["code"], "unknown-session");

    let (s, err) = call_json(
        &app,
        Method::POST,
        "/v1/sessions",
        Some(json!({ "graph": "z2" })),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(err["error"]["code"], "invalid-request");

    let (s, err) = call_json(
        &app,
        Method::POST,
        "/v1/sessions",
        Some(json!({ "graph": { "kind": "path", "n": 0 }, "schedule": { "c": 1, "d": 0 } })),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{err}");

    let (id, _) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 2 }, "schedule": { "c": 1, "d": 0 } }),
    )
    .await;
    let (s, err) = call_json(
        &app,
        Method::GET,
        &format!("/v1/sessions/{id}/view?radius=1000"),
        None,
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(err["error"]["code"], "invalid-request");
}

#[tokio::test]
async fn hint_is_advisory_and_fits_the_remaining_budget() {
    let app = app();
    let (id, v) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 2 }, "schedule": { "c": 3, "d": 0 } }),
    )
    .await;
    let (_, hint) = call_json(&app, Method::GET, &format!("/v1/sessions/{id}/hint"), None).await;
    assert_eq!(hint["advisory"], true);
    assert_eq!(hint["vertices"].as_array().unwrap().len(), 3);

    let near = ids_with(&v, |x| x.distance == 1);
    protect(&app, &id, &near[..1], false).await;
    let (_, hint) = call_json(&app, Method::GET, &format!("/v1/sessions/{id}/hint"), None).await;
    let suggested: Vec<VertexId> = serde_json::from_value(hint["vertices"].clone()).unwrap();
    assert_eq!(suggested.len(), 2);
    assert!(!suggested.contains(&near[0]));
    assert!(suggested.iter().all(|s| near.contains(s)));
    // Hints never commit anything.
    assert_eq!(view(&app, &id).await.pending, near[..1].to_vec());
}

#[tokio::test]
async fn exported_trace_validates_and_matches_the_session() {
    let app = app();
    let (id, v) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 2 }, "schedule": { "c": 2, "d": 0 } }),
    )
    .await;
    let near = ids_with(&v, |x| x.distance == 1);
    protect(&app, &id, &near[..2], false).await;
    call(&app, Method::POST, &format!("/v1/sessions/{id}/step"), None).await;
    call(&app, Method::POST, &format!("/v1/sessions/{id}/step"), None).await;
    let (s, bytes) = call(&app, Method::GET, &format!("/v1/sessions/{id}/trace"), None).await;
    assert_eq!(s, StatusCode::OK);
    let text = String::from_utf8(bytes).unwrap();
    validate_jsonl(&text).unwrap();
    let trace = Trace::parse_jsonl(&text).unwrap();
    assert_eq!(trace.turns.len(), 2);
    assert_eq!(trace.turns[0].protected, near[..2].to_vec());
    assert_eq!(trace.end.final_fire_size, view(&app, &id).await.fire_size);
}

#[tokio::test]
async fn large_fires_shrink_the_view_and_stop_at_the_cap() {
    let app = app();
    let (id, _) = create(
        &app,
        json!({ "graph": { "kind": "regular-tree", "degree": 3 }, "schedule": { "c": 0, "d": 0 } }),
    )
    .await;
    for _ in 0..12 {
        let (s, _) = call(&app, Method::POST, &format!("/v1/sessions/{id}/step"), None).await;
        assert_eq!(s, StatusCode::OK);
    }
    let v = view(&app, &id).await;
    // Ball of radius 12 in the 3-regular tree.
    assert_eq!(v.fire_size, 3 * ((1 << 12) - 1) + 1);
    assert!(v.radius < 3);
    assert!(v.vertices.len() <= 20_000);

    let (s, err) = call_json(&app, Method::POST, &format!("/v1/sessions/{id}/step"), None).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"]["code"], "cap-exceeded");
    assert_eq!(view(&app, &id).await, v);
}

#[tokio::test]
async fn idle_sessions_are_evicted() {
    let state = AppState::new(ServiceConfig {
        idle_timeout: Duration::from_secs(60),
        ..ServiceConfig::default()
    });
    let app = router(state.clone());
    let (id, _) = create(
        &app,
        json!({ "graph": { "kind": "grid", "dim": 1 }, "schedule": { "c": 1, "d": 0 } }),
    )
    .await;
    assert_eq!(state.evict_idle(Instant::now()), 0);
    assert_eq!(
        state.evict_idle(Instant::now() + Duration::from_secs(61)),
        1
    );
    let (s, _) = call(&app, Method::GET, &format!("/v1/sessions/{id}/view"), None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[derive(Debug, Clone)]
enum Op {
    Protect(Vec<usize>),
    Revoke(Vec<usize>),
    Step,
    Hint,
    View(usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => prop::collection::vec(0usize..64, 0..4).prop_map(Op::Protect),
        1 => prop::collection::vec(0usize..64, 1..3).prop_map(Op::Revoke),
        3 => Just(Op::Step),
        1 => Just(Op::Hint),
        1 => (0usize..6).prop_map(Op::View),
    ]
}

fn spec() -> impl Strategy<Value = Value> {
    prop_oneof![
        Just(json!({ "kind": "grid", "dim": 2 })),
        Just(json!({ "kind": "grid", "dim": 1 })),
        Just(json!({ "kind": "regular-tree", "degree": 3 })),
        Just(json!({ "kind": "cycle", "n": 12 })),
    ]
}

async fn fuzz_session(graph: Value, c: &str, d: u32, ops: Vec<Op>) {
    let app = app();
    let (id, mut last) = create(
        &app,
        json!({ "graph": graph, "schedule": { "c": c, "d": d } }),
    )
    .await;
    let mut committed: Vec<Vec<VertexId>> = Vec::new();
    for op in ops {
        let pick = |idx: &[usize], v: &View| -> Vec<VertexId> {
            idx.iter()
                .map(|i| v.vertices[i % v.vertices.len()].id.clone())
                .collect()
        };
        let (status, _) = match &op {
            Op::Protect(idx) => protect(&app, &id, &pick(idx, &last), false).await,
            Op::Revoke(idx) => protect(&app, &id, &pick(idx, &last), true).await,
            Op::Step => {
                call_json(&app, Method::POST, &format!("/v1/sessions/{id}/step"), None).await
            }
            Op::Hint => {
                call_json(&app, Method::GET, &format!("/v1/sessions/{id}/hint"), None).await
            }
            Op::View(r) => {
                call_json(
                    &app,
                    Method::GET,
                    &format!("/v1/sessions/{id}/view?radius={r}"),
                    None,
                )
                .await
            }
        };
        let now = view(&app, &id).await;

        if !status.is_success() {
            assert_eq!(now, last, "rejected {op:?} changed the session");
            continue;
        }
        assert!(now.pending.len() <= now.budget);
        for p in &now.pending {
            let vx = now.vertices.iter().find(|x| &x.id == p);
            assert!(
                vx.is_none_or(|x| x.status == Status::Open),
                "pending vertex {p} not open"
            );
        }
        assert!(now.fire_size >= last.fire_size);
        if let Op::Step = op {
            assert_eq!(now.time, last.time + 1);
            assert!(last.pending.len() <= last.budget);
            assert!(!last.contained, "stepped after containment");
            committed.push(last.pending.clone());
        } else {
            assert_eq!(now.time, last.time);
            assert_eq!(now.fire_size, last.fire_size);
        }
        last = now;
    }

    let (_, bytes) = call(&app, Method::GET, &format!("/v1/sessions/{id}/trace"), None).await;
    let text = String::from_utf8(bytes).unwrap();
    let validation = validate_jsonl(&text).unwrap();
    let trace = Trace::parse_jsonl(&text).unwrap();
    let turns: Vec<Vec<VertexId>> = trace.turns.iter().map(|t| t.protected.clone()).collect();
    assert_eq!(turns, committed);
    assert_eq!(trace.end.final_fire_size, last.fire_size);
    assert_eq!(validation.contained_at, last.contained_at);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_request_sequences_keep_the_game_legal(
        graph in spec(),
        c in prop_oneof![Just("1"), Just("2"), Just("3/2")],
        d in 0u32..2,
        ops in prop::collection::vec(op(), 1..30),
    ) {
        tokio::runtime::Builder::new_current_thread()
            .build()
            .unwrap()
            .block_on(fuzz_session(graph, c, d, ops));
    }
}
