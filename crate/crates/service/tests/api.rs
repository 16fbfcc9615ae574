use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tokio::sync::RwLock;
use tower::ServiceExt;

use semsnap_core::config::Config;
use semsnap_core::operations::all_plans;
use semsnap_core::relations::find_relations;
use semsnap_service::{router, Session};
use semsnap_testkit::load_fixture;

fn app(name: &str) -> Router {
    let session = Session::new(load_fixture(name), Config::default(), None);
    router(Arc::new(RwLock::new(session)), None)
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn get(app: &Router, uri: &str) -> Value {
    let (status, v) = call(app, Method::GET, uri, None).await;
    assert_eq!(status, StatusCode::OK, "{uri}: {v}");
    v
}

async fn post(app: &Router, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    call(app, Method::POST, uri, body).await
}

fn plan_id(menu: &Value, category: &str, needle: &str) -> String {
    menu["categories"][category]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["description"].as_str().unwrap().contains(needle))
        .unwrap_or_else(|| panic!("no {category} plan mentioning {needle}"))["id"]
        .as_str()
        .unwrap()
        .to_string()
}

fn codes(relations: &Value) -> Vec<String> {
    relations["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["code"].as_str().unwrap().to_string())
        .collect()
}

#[tokio::test]
async fn canvas_is_the_parsed_document() {
    let app = app("election");
    let doc = get(&app, "/api/canvas").await;
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["views"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn menu_counts_for_the_bottom_line() {
    let app = app("election");
    let menu = get(&app, "/api/views/trump/operations").await;
    assert_eq!(
        menu["counts"],
        json!({"differentiate": 1, "homogenize-data": 1, "integrate": 2})
    );
}

#[tokio::test]
async fn menu_counts_match_the_engine() {
    for name in ["election", "nightingale", "covid", "sales"] {
        let canvas = load_fixture(name);
        let app = app(name);
        for v in &canvas.views {
            let menu = get(&app, &format!("/api/views/{}/operations", v.id)).await;
            let served: u64 = menu["counts"]
                .as_object()
                .unwrap()
                .values()
                .map(|c| c.as_u64().unwrap())
                .sum();
            let engine =
                semsnap_core::operations::plan_operations(&canvas, &find_relations(&canvas), &v.id, &Config::default())
                    .unwrap();
            assert_eq!(served as usize, engine.len(), "{name}/{}", v.id);
        }
    }
}

#[tokio::test]
async fn differentiate_then_keep_drops_the_confuser() {
    let app = app("election");
    assert!(codes(&get(&app, "/api/relations").await).contains(&"R5".to_string()));
    let menu = get(&app, "/api/views/trump/operations").await;
    let id = plan_id(&menu, "differentiate", "pollsters");
    let (status, preview) = post(&app, &format!("/api/operations/{id}/apply"), None).await;
    assert_eq!(status, StatusCode::OK, "{preview}");
    assert_eq!(preview["pending"], true);
    assert!(!codes(&preview["relations"]).contains(&"R5".to_string()));

    let (status, kept) = post(&app, "/api/history/keep", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(kept["pending"], false);
    assert!(!codes(&get(&app, "/api/relations").await).contains(&"R5".to_string()));
    let position = get(&app, "/api/position").await;
    assert_eq!(position["trail"].as_array().unwrap().len(), 2);
    assert_eq!(position["current"], position["trail"][1]);
}

#[tokio::test]
async fn undo_restores_the_document() {
    let app = app("election");
    let before = get(&app, "/api/canvas").await;
    let relations_before = get(&app, "/api/relations").await;
    let id = plan_id(&get(&app, "/api/views/trump/operations").await, "integrate", "mirror");
    let (status, preview) = post(&app, &format!("/api/operations/{id}/apply"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(preview["document"]["views"].as_array().unwrap().len(), 2);

    let (status, _) = post(&app, "/api/history/undo", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(get(&app, "/api/canvas").await, before);
    assert_eq!(get(&app, "/api/relations").await, relations_before);
    // undo leaves the trail alone
    assert_eq!(get(&app, "/api/position").await["trail"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn second_apply_while_pending_conflicts() {
    let app = app("election");
    let menu = get(&app, "/api/views/trump/operations").await;
    let first = plan_id(&menu, "integrate", "mirror");
    let second = plan_id(&menu, "differentiate", "pollsters");
    assert_eq!(
        post(&app, &format!("/api/operations/{first}/apply"), None).await.0,
        StatusCode::OK
    );
    let (status, body) = post(&app, &format!("/api/operations/{second}/apply"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "pending");
    assert!(body["detail"].is_string());
}

#[tokio::test]
async fn stale_and_unknown_plans() {
    let app = app("election");
    let menu = get(&app, "/api/views/trump/operations").await;
    let mirror = plan_id(&menu, "integrate", "mirror");
    let overlay = plan_id(&menu, "integrate", "overlay");
    post(&app, &format!("/api/operations/{mirror}/apply"), None).await;
    post(&app, "/api/history/keep", None).await;
    let (status, body) = post(&app, &format!("/api/operations/{overlay}/apply"), None).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");
    assert_eq!(body["error"], "stale-plan");

    let (status, _) = post(&app, "/api/operations/000000000000/apply", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, Method::GET, "/api/views/ghost/operations", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn nothing_to_undo_or_keep() {
    let app = app("single");
    assert_eq!(post(&app, "/api/history/undo", None).await.0, StatusCode::CONFLICT);
    assert_eq!(post(&app, "/api/history/keep", None).await.0, StatusCode::CONFLICT);
}

#[tokio::test]
async fn conditional_operations_ask_first() {
    let app = app("sales");
    let menu = get(&app, "/api/views/europe/operations").await;
    let id = plan_id(&menu, "integrate", "group");
    let (status, body) = post(&app, &format!("/api/operations/{id}/apply"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "missing-confirmation");
    assert!(body["detail"]
        .as_str()
        .unwrap()
        .contains("representing the same quantity"));

    let answer = json!({"confirmations": [{"a": "sum(Europe)", "b": "sum(North America)", "same": false}]});
    let (status, body) = post(&app, &format!("/api/operations/{id}/apply"), Some(answer)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["withdrawn"], true);
    assert_eq!(body["pending"], false);
    let entry = &body["relations"]["entries"][0];
    assert_eq!(entry["code"], "R3a");
    assert_eq!(entry["conditional"], false);
    // answers are not operations, so the trail does not move
    assert_eq!(get(&app, "/api/position").await["trail"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn equivalences_update_relations() {
    let app = app("sales");
    let body = json!({"a": "sum(Europe)", "b": "sum(North America)", "same": true});
    let (status, snap) = post(&app, "/api/equivalences", Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{snap}");
    let doc = get(&app, "/api/canvas").await;
    assert_eq!(doc["equivalences"].as_array().unwrap().len(), 1);
    // same data under the same grouping is now redundant
    assert!(codes(&snap["relations"]).contains(&"R1".to_string()));

    let clash = json!({"a": "sum(Europe)", "b": "sum(North America)", "same": false});
    assert_eq!(
        post(&app, "/api/equivalences", Some(clash)).await.0,
        StatusCode::CONFLICT
    );
    let bad = json!({"a": "", "b": "sum(Europe)", "same": true});
    assert_eq!(
        post(&app, "/api/equivalences", Some(bad)).await.0,
        StatusCode::BAD_REQUEST
    );
}

#[tokio::test]
async fn render_returns_one_spec_per_view() {
    let app = app("nightingale");
    let specs = get(&app, "/api/render").await;
    assert_eq!(specs.as_array().unwrap().len(), 5);
    assert!(specs[0]["spec"]["seriesMarks"].is_array());
}

#[tokio::test]
async fn responses_match_a_fresh_detection() {
    let app = app("covid");
    let canvas = load_fixture("covid");
    let plans = all_plans(&canvas, &find_relations(&canvas), &Config::default());
    for p in plans.iter().take(6) {
        let (status, snap) = post(&app, &format!("/api/operations/{}/apply", p.id), None).await;
        assert_eq!(status, StatusCode::OK, "{snap}");
        let doc: semsnap_core::spec_io::CanvasDocument = serde_json::from_value(snap["document"].clone()).unwrap();
        let shown = semsnap_core::spec_io::from_document(doc, &semsnap_testkit::fixtures_dir()).unwrap();
        let fresh = serde_json::to_value(semsnap_core::spec_io::lint_report(&find_relations(&shown))).unwrap();
        assert_eq!(snap["relations"], fresh);
        post(&app, "/api/history/undo", None).await;
    }
}

#[tokio::test]
async fn save_writes_the_kept_canvas() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.canvas.json");
    let session = Session::new(load_fixture("single"), Config::default(), Some(path.clone()));
    let saving = router(Arc::new(RwLock::new(session)), None);
    let (status, body) = call(&saving, Method::PUT, "/api/canvas", None).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        written,
        semsnap_core::spec_io::serialize_canvas(&load_fixture("single"))
    );

    let unsaved = app("single");
    assert_eq!(
        call(&unsaved, Method::PUT, "/api/canvas", None).await.0,
        StatusCode::CONFLICT
    );
}

#[tokio::test]
async fn ui_bundle_is_served_at_root() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>ui</html>").unwrap();
    let session = Session::new(load_fixture("single"), Config::default(), None);
    let app = router(Arc::new(RwLock::new(session)), Some(dir.path().to_path_buf()));
    let res = app
        .oneshot(Request::get("/").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(res.status(), StatusCode::OK);
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&bytes[..], b"<html>ui</html>");
}
