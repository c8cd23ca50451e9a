use cnim::cache::{cache_file_name, cache_path, solve_cached, CacheStatus};
use cnim::parallel::{solve_parallel, Rayon};
use cnim::table_file::{decode, encode, load_table, load_table_expecting, save_table, TableFileError, HEADER_LEN};
use cnim_core::game::GameSpec;
use cnim_core::solver::{solve_outcomes, solve_outcomes_with, SolveLimits};

fn spec(n: usize, k: usize) -> GameSpec {
    GameSpec::new(n, k).unwrap()
}

#[test]
fn header_layout() {
    let t = solve_outcomes(&spec(3, 2), 2, &SolveLimits::default()).unwrap();
    let bytes = encode(&t);
    assert_eq!(&bytes[..HEADER_LEN], &[b'C', b'N', b'I', b'M', 1, 3, 2, 2, 0]);
    assert_eq!(bytes.len(), HEADER_LEN + 27usize.div_ceil(8));
    // bit 0 of the first data byte is the empty board, always a loss
    assert_eq!(bytes[HEADER_LEN] & 1, 1);
    let t = solve_outcomes(&spec(1, 1), 300, &SolveLimits::default()).unwrap();
    assert_eq!(&encode(&t)[7..9], &300u16.to_le_bytes());
}

#[test]
fn round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (n, k, h) in [(3, 2, 2), (4, 2, 5), (5, 3, 3), (8, 6, 2), (1, 1, 9)] {
        let t = solve_outcomes(&spec(n, k), h, &SolveLimits::default()).unwrap();
        let path = dir.path().join(cache_file_name(&spec(n, k), h));
        save_table(&t, &path).unwrap();
        let back = load_table(&path).unwrap();
        assert_eq!(back, t);
        assert_eq!(std::fs::read(&path).unwrap(), encode(&t));
        assert_eq!(encode(&back), encode(&t));
    }
}

#[test]
fn malformed_files() {
    let t = solve_outcomes(&spec(3, 2), 2, &SolveLimits::default()).unwrap();
    let bytes = encode(&t);
    assert!(matches!(decode(&bytes[..bytes.len() - 1]), Err(TableFileError::FormatMismatch(_))));
    assert!(matches!(decode(&bytes[..5]), Err(TableFileError::FormatMismatch(_))));
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(decode(&bad), Err(TableFileError::FormatMismatch(_))));
    let mut bad = bytes.clone();
    bad[4] = 2;
    assert!(matches!(decode(&bad), Err(TableFileError::FormatMismatch(_))));
    let mut bad = bytes.clone();
    bad[6] = 9;
    assert!(matches!(decode(&bad), Err(TableFileError::FormatMismatch(_))));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.cnim");
    save_table(&t, &path).unwrap();
    assert!(matches!(
        load_table_expecting(&path, &spec(3, 1), 2),
        Err(TableFileError::SpecMismatch { found_k: 2, .. })
    ));
    assert!(matches!(load_table_expecting(&path, &spec(3, 2), 3), Err(TableFileError::SpecMismatch { .. })));
    assert!(load_table_expecting(&path, &spec(3, 2), 2).is_ok());
    assert!(matches!(load_table(&dir.path().join("missing")), Err(TableFileError::Io(_))));
}

#[test]
fn parallel_matches_sequential() {
    for (n, k, h) in [(4, 2, 8), (5, 2, 6), (6, 3, 5), (6, 4, 4), (8, 6, 3), (7, 3, 3), (6, 2, 5)] {
        let s = spec(n, k);
        let seq = solve_outcomes(&s, h, &SolveLimits::default()).unwrap();
        let par = solve_parallel(&s, h, &SolveLimits::default()).unwrap();
        assert_eq!(encode(&seq), encode(&par), "CN({n},{k}) H={h}");
        // every shell split across workers
        let all = solve_outcomes_with(&s, h, &SolveLimits::default(), &mut Rayon { min_parallel: 0 }).unwrap();
        assert_eq!(encode(&seq), encode(&all));
    }
}

#[test]
fn cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(5, 2);
    let limits = SolveLimits::default();
    let (a, st) = solve_cached(&s, 4, &limits, Some(dir.path())).unwrap();
    assert_eq!(st, CacheStatus::Solved);
    assert!(cache_path(dir.path(), &s, 4).ends_with("cn5-2-h4-v1.cnim"));
    let (b, st) = solve_cached(&s, 4, &limits, Some(dir.path())).unwrap();
    assert_eq!(st, CacheStatus::Hit);
    assert_eq!(a, b);
    let (_, st) = solve_cached(&s, 4, &limits, None).unwrap();
    assert_eq!(st, CacheStatus::Uncached);
    assert!(solve_cached(&spec(8, 6), 9, &limits, Some(dir.path())).is_err());
}
