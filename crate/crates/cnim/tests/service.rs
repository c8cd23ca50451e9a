use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use cnim::service::{
    router, stalling_move, CreateRequest, EngineMode, GameService, MoveJson, ServiceConfig, ServiceError, Side, Status,
};
use cnim_core::characterize::{membership, CharacterizedGame};
use cnim_core::game::{apply_move, options, GameSpec, Height, Position};
use cnim_core::solver::SolveLimits;
use http_body_util::BodyExt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use tower::ServiceExt;

fn small_service() -> Arc<GameService> {
    Arc::new(GameService::new(ServiceConfig { table_height: Some(3), cache_dir: None, limits: SolveLimits::default() }))
}

async fn call(svc: &Arc<GameService>, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = router(svc.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn spec(n: usize, k: usize) -> GameSpec {
    GameSpec::new(n, k).unwrap()
}

#[tokio::test]
async fn engine_replies_into_the_losing_set() {
    let svc = small_service();
    let (st, v) = call(
        &svc,
        "POST",
        "/games",
        Some(json!({"n": 4, "k": 2, "position": [3, 5, 4, 2], "human_first": false, "engine_mode": "THEOREM"})),
    )
    .await;
    assert_eq!(st, StatusCode::OK, "{v}");
    let id = v["id"].as_str().unwrap().to_string();
    assert_eq!(id.len(), 32);
    assert_eq!(v["state"], json!({"n": 4, "k": 2, "position": [3, 5, 4, 2], "to_move": "ENGINE", "status": "ONGOING"}));

    let (st, v) = call(&svc, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert_eq!(v["state"]["position"], json!([3, 2, 3, 2]));
    assert_eq!(v["move"], json!({"start": 2, "removals": [3, 1]}));
    assert_eq!(v["position_was_losing"], false);
    assert_eq!(v["state"]["to_move"], "HUMAN");

    let (st, v) = call(&svc, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["position"], json!([3, 2, 3, 2]));
}

#[tokio::test]
async fn cn53_documented_reply() {
    let svc = small_service();
    let (_, v) = call(
        &svc,
        "POST",
        "/games",
        Some(json!({"n": 5, "k": 3, "position": [3, 9, 5, 7, 4], "human_first": false, "engine_mode": "THEOREM"})),
    )
    .await;
    let id = v["id"].as_str().unwrap();
    let (_, v) = call(&svc, "POST", &format!("/games/{id}/engine-move"), None).await;
    let pos: Vec<Height> = serde_json::from_value(v["state"]["position"].clone()).unwrap();
    assert!(membership(&spec(5, 3), &Position::new(pos.clone())).unwrap());
    assert_eq!(pos, vec![3, 7, 0, 7, 4]);
}

#[tokio::test]
async fn errors_are_400_with_codes() {
    let svc = small_service();
    let (st, v) = call(
        &svc,
        "POST",
        "/games",
        Some(json!({"n": 6, "k": 2, "position": [1, 1, 1, 1, 1, 1], "human_first": true, "engine_mode": "THEOREM"})),
    )
    .await;
    assert_eq!((st, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("UNSUPPORTED")));
    assert!(v["message"].as_str().unwrap().contains("CN(6,2)"));

    let (st, v) = call(
        &svc,
        "POST",
        "/games",
        Some(json!({"n": 4, "k": 2, "position": [9, 1, 1, 1], "human_first": true, "engine_mode": "TABLE"})),
    )
    .await;
    assert_eq!((st, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("OUT_OF_RANGE")));

    let (st, v) = call(&svc, "POST", "/games", Some(json!({"n": 4}))).await;
    assert_eq!((st, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("BAD_REQUEST")));

    let (st, v) = call(&svc, "GET", "/games/nope", None).await;
    assert_eq!((st, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("UNKNOWN_SESSION")));

    let (_, v) = call(
        &svc,
        "POST",
        "/games",
        Some(json!({"n": 4, "k": 2, "position": [3, 5, 4, 2], "human_first": true, "engine_mode": "THEOREM"})),
    )
    .await;
    let id = v["id"].as_str().unwrap().to_string();
    let moves = format!("/games/{id}/moves");
    let (st, v) = call(&svc, "POST", &moves, Some(json!({"start": 1, "removals": [0, 0]}))).await;
    assert_eq!((st, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("ILLEGAL_MOVE")));
    let (st, v) = call(&svc, "POST", &moves, Some(json!({"start": 1, "removals": [4, 0]}))).await;
    assert_eq!(v["error"], "ILLEGAL_MOVE", "{st}");
    let (_, v) = call(&svc, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(v["error"], "WRONG_TURN");

    let (st, v) = call(&svc, "POST", &moves, Some(json!({"start": 4, "removals": [2, 1]}))).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    // window 4 wraps onto stack 1
    assert_eq!(v["position"], json!([2, 5, 4, 0]));
    // replaying the same request is rejected, not applied twice
    let (_, v) = call(&svc, "POST", &moves, Some(json!({"start": 4, "removals": [2, 1]}))).await;
    assert_eq!(v["error"], "WRONG_TURN");
}

#[tokio::test]
async fn finished_games_accept_nothing() {
    let svc = small_service();
    let (_, v) = call(
        &svc,
        "POST",
        "/games",
        Some(json!({"n": 3, "k": 3, "position": [0, 0, 0], "human_first": false, "engine_mode": "THEOREM"})),
    )
    .await;
    assert_eq!(v["state"]["status"], "FINISHED");
    assert_eq!(v["state"]["winner"], "HUMAN");
    let id = v["id"].as_str().unwrap().to_string();
    let (_, v) = call(&svc, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(v["error"], "WRONG_TURN");

    let (_, v) = call(
        &svc,
        "POST",
        "/games",
        Some(json!({"n": 3, "k": 3, "position": [1, 0, 2], "human_first": true, "engine_mode": "THEOREM"})),
    )
    .await;
    let id = v["id"].as_str().unwrap().to_string();
    let (_, v) = call(&svc, "POST", &format!("/games/{id}/moves"), Some(json!({"start": 3, "removals": [2, 1, 0]}))).await;
    assert_eq!(v["status"], "FINISHED");
    assert_eq!(v["winner"], "HUMAN");
    let (_, v) = call(&svc, "POST", &format!("/games/{id}/moves"), Some(json!({"start": 1, "removals": [1, 0, 0]}))).await;
    assert_eq!(v["error"], "WRONG_TURN");
}

#[tokio::test]
async fn classify_and_losing_set() {
    let svc = small_service();
    let (st, v) = call(&svc, "GET", "/classify?n=4&k=2&pos=(3,2,3,2)", None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v, json!({"theorem": "LOSS", "solver": "LOSS"}));
    let (_, v) = call(&svc, "GET", "/classify?n=6&k=2&pos=(1,0,0,0,0,0)", None).await;
    assert_eq!(v, json!({"theorem": null, "solver": "WIN"}));
    let (_, v) = call(&svc, "GET", "/classify?n=6&k=2&pos=oops", None).await;
    assert_eq!(v["error"], "BAD_REQUEST");

    let (st, v) = call(&svc, "GET", "/losing-set?n=4&k=2&max_height=2", None).await;
    assert_eq!(st, StatusCode::OK);
    // canonical (a,b,a,b) with a <= b, by total then lexicographically
    assert_eq!(v["positions"], json!([[0, 0, 0, 0], [0, 1, 0, 1], [0, 2, 0, 2], [1, 1, 1, 1], [1, 2, 1, 2], [2, 2, 2, 2]]));
}

#[test]
fn cn86_member_puts_engine_in_the_winning_seat() {
    let svc = small_service();
    let s = svc
        .create(CreateRequest {
            n: 8,
            k: 6,
            position: vec![0, 3, 1, 2, 3, 1, 2, 3],
            human_first: true,
            engine_mode: EngineMode::Theorem,
        })
        .unwrap();
    assert_eq!(s.status(), Status::Ongoing);
    let s = svc.human_move(&s.id, &MoveJson { start: 2, removals: vec![3, 1, 0, 0, 0, 0] }).unwrap();
    let r = svc.engine_move(&s.id).unwrap();
    assert!(!r.position_was_losing);
    assert!(membership(&spec(8, 6), &Position::new(r.state.position)).unwrap());
}

#[test]
fn stalling_takes_one_token() {
    let s = spec(4, 2);
    let mv = stalling_move(&s, &Position::from(&[1u32, 1, 1, 1][..]));
    assert_eq!((mv.start, mv.removals), (0, vec![1, 0]));
    // emptying a stack costs more options than shaving a tall one
    let mv = stalling_move(&s, &Position::from(&[3u32, 1, 3, 1][..]));
    assert_eq!((mv.start, mv.removals), (0, vec![1, 0]));
    let mv = stalling_move(&spec(5, 5), &Position::from(&[0u32, 0, 0, 0, 2][..]));
    assert_eq!(mv.removals.iter().sum::<u32>(), 1);
    assert_eq!(mv.removals[4], 1);
}

#[test]
fn losing_seat_stalls_and_flags_it() {
    let svc = small_service();
    let s = svc
        .create(CreateRequest { n: 4, k: 2, position: vec![2, 1, 2, 1], human_first: false, engine_mode: EngineMode::Table })
        .unwrap();
    let r = svc.engine_move(&s.id).unwrap();
    assert!(r.position_was_losing);
    assert_eq!(r.mv.removals.iter().sum::<u32>(), 1);
}

#[test]
fn concurrent_replays_apply_once() {
    let svc = small_service();
    let s = svc
        .create(CreateRequest {
            n: 5,
            k: 2,
            position: vec![3, 3, 3, 3, 3],
            human_first: true,
            engine_mode: EngineMode::Theorem,
        })
        .unwrap();
    let results: Vec<Result<_, ServiceError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let svc = svc.clone();
                let id = s.id.clone();
                scope.spawn(move || svc.human_move(&id, &MoveJson { start: 1, removals: vec![1, 0] }))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(results.iter().filter(|r| r.is_ok()).count(), 1);
    assert!(results.iter().filter(|r| r.is_err()).all(|r| r.as_ref().unwrap_err() == &ServiceError::WrongTurn));
    assert_eq!(svc.get(&s.id).unwrap().position, vec![2, 3, 3, 3, 3]);
}

#[test]
fn snapshot_round_trip() {
    let svc = small_service();
    let s = svc
        .create(CreateRequest { n: 4, k: 2, position: vec![1, 2, 3, 4], human_first: true, engine_mode: EngineMode::Theorem })
        .unwrap();
    let snap = serde_json::to_string(&svc.snapshot()).unwrap();
    let other = small_service();
    other.restore(serde_json::from_str(&snap).unwrap());
    assert_eq!(other.get(&s.id).unwrap(), s);
}

const CHARACTERIZED: [(usize, usize); 14] = [
    (1, 1),
    (3, 1),
    (4, 1),
    (2, 2),
    (4, 4),
    (3, 2),
    (5, 4),
    (6, 5),
    (4, 2),
    (5, 2),
    (5, 3),
    (6, 3),
    (6, 4),
    (8, 6),
];

fn all_positions(n: usize, h: Height) -> impl Iterator<Item = Vec<Height>> {
    let count = (h as usize + 1).pow(n as u32);
    (0..count).map(move |mut i| {
        (0..n)
            .map(|_| {
                let d = (i % (h as usize + 1)) as Height;
                i /= h as usize + 1;
                d
            })
            .collect()
    })
}

/// Engine moves first from a winning position; the opponent answers with
/// a random option. Returns the winner.
fn self_play(svc: &GameService, n: usize, k: usize, start: Vec<Height>, mode: EngineMode, rng: &mut StdRng) -> Side {
    let sp = spec(n, k);
    let s = svc.create(CreateRequest { n, k, position: start, human_first: false, engine_mode: mode }).unwrap();
    let game = CharacterizedGame::for_spec(&sp).unwrap();
    loop {
        let r = svc.engine_move(&s.id).unwrap();
        assert!(!r.position_was_losing, "CN({n},{k}) engine was in a losing seat");
        assert!(game.contains(&r.state.position), "CN({n},{k}) opponent faces {:?}", r.state.position);
        if r.state.status == Status::Finished {
            return r.state.winner.unwrap();
        }
        let pos = Position::new(r.state.position.clone());
        let opts: Vec<Position> = options(&sp, &pos).into_iter().collect();
        let next = &opts[rng.random_range(0..opts.len())];
        let mv = cnim_core::game::Move::between(&sp, &pos, next).unwrap();
        assert_eq!(&apply_move(&sp, &pos, &mv).unwrap(), next);
        let after = svc.human_move(&s.id, &MoveJson::from_move(&mv)).unwrap();
        if after.status() == Status::Finished {
            return after.winner.unwrap();
        }
    }
}

#[test]
fn engine_never_loses_from_a_winning_seat() {
    let svc = small_service();
    let mut rng = StdRng::seed_from_u64(7);
    for (n, k) in CHARACTERIZED {
        let game = CharacterizedGame::for_spec(&spec(n, k)).unwrap();
        let mut games = 0;
        for start in all_positions(n, 2) {
            if game.contains(&start) {
                continue;
            }
            for mode in [EngineMode::Theorem, EngineMode::Table] {
                assert_eq!(self_play(&svc, n, k, start.clone(), mode, &mut rng), Side::Engine, "CN({n},{k}) {start:?}");
            }
            games += 1;
        }
        assert!(games > 0);
    }
}

#[test]
fn hundred_random_games_per_game() {
    let svc = small_service();
    let mut rng = StdRng::seed_from_u64(11);
    for (n, k) in CHARACTERIZED {
        let game = CharacterizedGame::for_spec(&spec(n, k)).unwrap();
        let mut won = 0;
        while won < 100 {
            let start: Vec<Height> = (0..n).map(|_| rng.random_range(0..=2)).collect();
            if game.contains(&start) {
                continue;
            }
            assert_eq!(self_play(&svc, n, k, start, EngineMode::Theorem, &mut rng), Side::Engine);
            won += 1;
        }
    }
}
