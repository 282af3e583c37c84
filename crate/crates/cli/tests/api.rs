use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use cookie_cli::api::{router, ApiConfig, EvalResponse, StepResponse, StepStatus};
use cookie_core::game::{classify_position, GamePosition, Status};
use cookie_core::{Move, SolveResult};
use http_body_util::BodyExt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(ApiConfig::default())
}

async fn call(
    app: &Router,
    method: &str,
    uri: &str,
    body: Option<String>,
) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

async fn post<T: DeserializeOwned>(app: &Router, uri: &str, body: Value) -> T {
    let (status, bytes) = call(app, "POST", uri, Some(body.to_string())).await;
    assert_eq!(
        status,
        StatusCode::OK,
        "{}",
        String::from_utf8_lossy(&bytes)
    );
    serde_json::from_slice(&bytes).unwrap()
}

async fn post_err(app: &Router, uri: &str, body: &str) -> (StatusCode, Value) {
    let (status, bytes) = call(app, "POST", uri, Some(body.to_string())).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

#[tokio::test]
async fn health() {
    let (status, bytes) = call(&app(), "GET", "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        serde_json::from_slice::<Value>(&bytes).unwrap(),
        json!({ "ok": true })
    );
}

#[tokio::test]
async fn eval_examples() {
    let app = app();
    for jars in [[0, 1, 2], [0, 0, 0], [1, 1, 4]] {
        let r: EvalResponse = post(&app, "/api/game/eval", json!({ "jars": jars })).await;
        assert_eq!(r.status, Status::P, "{jars:?}");
        assert!(r.winning_moves.is_empty());
    }
    let r: EvalResponse = post(&app, "/api/game/eval", json!({ "jars": [2, 1, 2] })).await;
    assert_eq!(r.jars, vec![1, 2, 2]);
    assert_eq!(r.status, Status::N);
    let pos = GamePosition::new(r.jars.clone());
    assert!(r
        .winning_moves
        .iter()
        .any(|mv| pos.apply(mv).unwrap() == GamePosition::new([0, 1, 2])));
}

#[tokio::test]
async fn eval_wire_format() {
    let (status, bytes) = call(
        &app(),
        "POST",
        "/api/game/eval",
        Some(r#"{"jars":[1,2,2]}"#.into()),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["status"], "N");
    assert!(v["winningMoves"]
        .as_array()
        .unwrap()
        .contains(&json!({ "amount": 2, "targets": [2] })));
}

#[tokio::test]
async fn step_engine_move_from_n_position() {
    let r: StepResponse = post(&app(), "/api/game/step", json!({ "jars": [1, 2, 2] })).await;
    assert_eq!(r.engine_reply, Some(Move::new(2, [2])));
    assert_eq!(r.jars, vec![0, 1, 2]);
    assert_eq!(r.status, StepStatus::HumanToMove);
    assert_eq!(r.analysis.unwrap().status, Status::P);
}

#[tokio::test]
async fn step_human_reaches_p_and_engine_delays() {
    let body = json!({ "jars": [1, 2, 2], "move": { "amount": 2, "targets": [2] } });
    let r: StepResponse = post(&app(), "/api/game/step", body).await;
    assert_eq!(r.applied, vec![0, 1, 2]);
    assert!(r.engine_reply.is_some());
    assert_eq!(r.status, StepStatus::HumanToMove);
    assert_eq!(r.analysis.unwrap().status, Status::N);
}

#[tokio::test]
async fn step_human_empties_last_jar() {
    let body = json!({ "jars": [0, 0, 1], "move": { "amount": 1, "targets": [2] } });
    let r: StepResponse = post(&app(), "/api/game/step", body).await;
    assert_eq!(r.status, StepStatus::HumanWon);
    assert_eq!(r.jars, vec![0, 0, 0]);
    assert!(r.engine_reply.is_none());
}

#[tokio::test]
async fn step_engine_punishes_move_off_p_position() {
    // {0, 3, 5} is P; any move leaves N and the engine returns to P.
    let body = json!({ "jars": [3, 5, 0], "move": { "amount": 1, "targets": [1] } });
    let r: StepResponse = post(&app(), "/api/game/step", body).await;
    assert_eq!(r.applied, vec![0, 3, 4]);
    assert!(r.engine_reply.is_some());
    assert_eq!(
        classify_position(&GamePosition::new(r.jars.clone()))
            .unwrap()
            .status,
        Status::P
    );
}

#[tokio::test]
async fn step_without_reply_classifies() {
    let body = json!({ "jars": [2, 3], "move": { "amount": 1, "targets": [0] }, "reply": false });
    let r: StepResponse = post(&app(), "/api/game/step", body).await;
    assert_eq!(r.status, StepStatus::EngineToMove);
    assert_eq!(r.jars, vec![1, 3]);
    assert_eq!(r.analysis.unwrap().status, Status::N);
}

#[tokio::test]
async fn engine_wins_outright() {
    let r: StepResponse = post(&app(), "/api/game/step", json!({ "jars": [0, 4, 4] })).await;
    assert_eq!(r.status, StepStatus::EngineWon);
    assert_eq!(r.jars, vec![0, 0, 0]);
}

#[tokio::test]
async fn bad_requests() {
    let app = app();
    let cases = [
        ("/api/game/eval", "not json", "malformed"),
        ("/api/game/eval", r#"{"jars":[1,-2]}"#, "malformed"),
        (
            "/api/game/step",
            r#"{"jars":[1,2],"move":{"amount":3,"targets":[0]}}"#,
            "invalid_move",
        ),
        (
            "/api/game/step",
            r#"{"jars":[1,2],"move":{"amount":1,"targets":[5]}}"#,
            "invalid_move",
        ),
        (
            "/api/game/step",
            r#"{"jars":[1,2],"move":{"amount":1,"targets":[1,1]}}"#,
            "invalid_move",
        ),
        (
            "/api/game/step",
            r#"{"jars":[1,2],"move":{"amount":0,"targets":[1]}}"#,
            "invalid_move",
        ),
        ("/api/game/step", r#"{"jars":[0,0]}"#, "no_moves"),
    ];
    for (uri, body, reason) in cases {
        let (status, v) = post_err(&app, uri, body).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        assert_eq!(v["reason"], reason, "{body}");
        assert!(v["error"].is_string());
    }
}

#[tokio::test]
async fn limits() {
    let app = app();
    let cases = [
        ("/api/game/eval", r#"{"jars":[1,2,3,4]}"#),
        ("/api/game/eval", r#"{"jars":[1,2,100000]}"#),
        ("/api/game/step", r#"{"jars":[1,2,100000]}"#),
        ("/api/solve", r#"{"set":[1,2,3,4,5,6,7,8,9,10,11,12,13]}"#),
        ("/api/solve", r#"{"set":[1,2,10000000]}"#),
    ];
    for (uri, body) in cases {
        let (status, v) = post_err(&app, uri, body).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
        assert_eq!(v["reason"], "limit_exceeded");
    }
}

#[tokio::test]
async fn solve_endpoint() {
    let r: SolveResult = post(&app(), "/api/solve", json!({ "set": [13, 10, 7, 6] })).await;
    assert_eq!(r.cm, 3);
    assert!(cookie_core::solver::verify_trace(&r.set, &r.trace));
}

#[tokio::test]
async fn requests_are_independent() {
    let app = app();
    let body = json!({ "jars": [3, 5, 7] });
    let first: StepResponse = post(&app, "/api/game/step", body.clone()).await;
    let _: StepResponse = post(&app, "/api/game/step", json!({ "jars": [9, 9, 1] })).await;
    let again: StepResponse = post(&app, "/api/game/step", body).await;
    assert_eq!(first.jars, again.jars);
    assert_eq!(first.engine_reply, again.engine_reply);
    let fresh: StepResponse =
        post(&self::app(), "/api/game/step", json!({ "jars": [3, 5, 7] })).await;
    assert_eq!(fresh.jars, first.jars);
}

#[tokio::test]
async fn static_files_served_when_configured() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>jars</p>").unwrap();
    let app = router(ApiConfig {
        static_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    });
    let (status, bytes) = call(&app, "GET", "/index.html", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(bytes, b"<p>jars</p>");
    let (status, _) = call(&app, "GET", "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
}

/// Plays the engine, via the service, against a random opponent from `start`.
/// Returns true when the engine emptied the last jar.
async fn engine_game(app: &Router, start: Vec<u64>, rng: &mut ChaCha8Rng) -> bool {
    let mut r: StepResponse = post(app, "/api/game/step", json!({ "jars": start })).await;
    loop {
        match r.status {
            StepStatus::EngineWon => return true,
            StepStatus::HumanWon => return false,
            StepStatus::EngineToMove => unreachable!(),
            StepStatus::HumanToMove => {}
        }
        let pos = GamePosition::new(r.jars.clone());
        let moves = pos.moves();
        let mv = moves.choose(rng).unwrap().clone();
        r = post(app, "/api/game/step", json!({ "jars": r.jars, "move": mv })).await;
    }
}

#[tokio::test]
async fn engine_never_loses_two_jar_n_positions() {
    let app = app();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for a in 0..=20u64 {
        for b in a..=20 {
            let pos = GamePosition::new([a, b]);
            if classify_position(&pos).unwrap().status == Status::N {
                assert!(engine_game(&app, vec![a, b], &mut rng).await, "{pos}");
            }
        }
    }
}

#[tokio::test]
async fn engine_never_loses_sampled_three_jar_n_positions() {
    let app = app();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut played = 0;
    while played < 150 {
        let jars: Vec<u64> = (0..3).map(|_| rng.gen_range(0..=30)).collect();
        let pos = GamePosition::new(jars.clone());
        if classify_position(&pos).unwrap().status == Status::N {
            assert!(engine_game(&app, jars, &mut rng).await, "{pos}");
            played += 1;
        }
    }
}
