use cnim_core::characterize::{membership, translate, CharacterizedGame};
use cnim_core::game::{apply_move, canonicalize, options, DihedralTransform, GameSpec, Height, Move, Position};
use cnim_core::solver::{grundy, solve_outcomes, Indexer, Outcome, SolveLimits};
use cnim_core::strategy::winning_move;
use proptest::prelude::*;

fn spec(n: usize, k: usize) -> GameSpec {
    GameSpec::new(n, k).unwrap()
}

const CHARACTERIZED: [(usize, usize); 8] = [(4, 2), (5, 2), (5, 3), (6, 3), (6, 4), (8, 6), (5, 4), (3, 1)];

fn heights(n: usize, max: Height) -> impl Strategy<Value = Vec<Height>> {
    prop::collection::vec(0..=max, n)
}

proptest! {
    #[test]
    fn membership_is_dihedral_invariant(i in 0..CHARACTERIZED.len(), h in heights(8, 30)) {
        let (n, k) = CHARACTERIZED[i];
        let s = spec(n, k);
        let p = Position::from(&h[..n]);
        let m = membership(&s, &p).unwrap();
        for t in DihedralTransform::all(n) {
            prop_assert_eq!(membership(&s, &Position::new(t.apply(p.heights()))).unwrap(), m);
        }
        prop_assert_eq!(membership(&s, &canonicalize(&p).0).unwrap(), m);
    }

    #[test]
    fn translation_closure(six in any::<bool>(), h in heights(6, 40), m in 0i64..50) {
        let (n, k) = if six { (6, 3) } else { (5, 2) };
        let s = spec(n, k);
        let p = Position::from(&h[..n]);
        let q = translate(&p, m).unwrap();
        prop_assert_eq!(membership(&s, &p).unwrap(), membership(&s, &q).unwrap());
    }

    #[test]
    fn opposite_pairs_force_the_third(a in 0u32..1000, b in 0u32..1000, c in 0u32..1000, d in 0u32..1000) {
        // a+b = d+e and b+c = e+f with e, f chosen to satisfy both
        let e = (a + b).checked_sub(d);
        prop_assume!(e.is_some());
        let e = e.unwrap();
        let f = (b + c).checked_sub(e);
        prop_assume!(f.is_some());
        let f = f.unwrap();
        prop_assert_eq!(c + d, f + a);
    }

    #[test]
    fn winning_moves_land_in_the_losing_set(i in 0..CHARACTERIZED.len(), h in heights(8, 200)) {
        let (n, k) = CHARACTERIZED[i];
        let s = spec(n, k);
        let p = Position::from(&h[..n]);
        if !membership(&s, &p).unwrap() {
            let mv = winning_move(&s, &p).unwrap();
            let q = apply_move(&s, &p, &mv).unwrap();
            prop_assert!(membership(&s, &q).unwrap());
            prop_assert_eq!(Move::between(&s, &p, &q), Some(mv));
        }
    }
}

#[test]
fn members_have_no_member_options() {
    for (n, k) in CHARACTERIZED {
        let s = spec(n, k);
        let game = CharacterizedGame::for_spec(&s).unwrap();
        let h = if n >= 8 { 2 } else { 3 };
        let idx = Indexer::new(&s, h, &SolveLimits::default()).unwrap();
        for i in 0..idx.len() as u32 {
            let p = idx.position(i);
            if game.contains(p.heights()) {
                assert!(options(&s, &p).iter().all(|q| !game.contains(q.heights())), "CN({n},{k}) {p}");
            }
        }
    }
}

#[test]
fn cn86_zeros_sit_between_maximal_stacks() {
    let s = spec(8, 6);
    let t = solve_outcomes(&s, 4, &SolveLimits::default()).unwrap();
    let mut with_zero = 0;
    for p in t.losing_positions() {
        let h = p.heights();
        let max = *h.iter().max().unwrap();
        for (i, &v) in h.iter().enumerate() {
            if v == 0 && max > 0 {
                with_zero += 1;
                assert_eq!((h[(i + 7) % 8], h[(i + 1) % 8]), (max, max), "{p}");
            }
        }
    }
    assert!(with_zero > 0);
}

#[test]
fn grundy_zero_exactly_on_losses() {
    for (n, k, h) in [(4, 2, 4), (5, 3, 3), (6, 2, 2), (7, 3, 2)] {
        let s = spec(n, k);
        let limits = SolveLimits::default();
        let g = grundy(&s, h, &limits).unwrap();
        let t = solve_outcomes(&s, h, &limits).unwrap();
        for (i, &v) in g.values().iter().enumerate() {
            assert_eq!(v == 0, t.is_loss_index(i as u32), "CN({n},{k}) {}", t.position_at(i as u32));
        }
    }
}

#[test]
fn documented_outcomes() {
    let limits = SolveLimits::default();
    let t = solve_outcomes(&spec(3, 2), 2, &limits).unwrap();
    let losses: Vec<Position> = t.losing_positions().collect();
    assert_eq!(losses, [[0, 0, 0], [1, 1, 1], [2, 2, 2]].map(|h| Position::from(&h[..])));
    let t = solve_outcomes(&spec(4, 2), 3, &limits).unwrap();
    assert_eq!(t.outcome(&Position::from(&[3u32, 2, 3, 2][..])), Ok(Outcome::Loss));
    let t = solve_outcomes(&spec(2, 2), 1, &limits).unwrap();
    assert_eq!(t.outcome(&Position::from(&[1u32, 0][..])), Ok(Outcome::Win));
    let g = grundy(&spec(2, 1), 2, &limits).unwrap();
    assert_eq!(g.value(&Position::from(&[1u32, 2][..])), Ok(3));
}
