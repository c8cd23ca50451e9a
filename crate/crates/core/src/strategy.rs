//! Constructive winning moves for the characterized games.
//!
//! Every generator builds a target position and checks it before answering:
//! the target must be reachable in one move and lie in the losing set. Case
//! analyses that assume a particular labeling ("without loss of generality")
//! are run under every rotation/reflection in turn, rotations first.
//!
//! For `CN(8,6)` the generators are tried in the order valley, trapezoid,
//! first double-min, second double-min, max-min, clean-up. If none of them
//! produces a verified move, a search over all options is used and the
//! answer is marked [`Route::Fallback`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::characterize::CharacterizedGame;
use crate::game::{nim_zeroing_reduction, options, DihedralTransform, GameSpec, Height, Move, Position};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("position is already in the losing set; no winning move exists")]
    NotApplicable,
    #[error("no closed-form strategy is known for {0}")]
    Unsupported(GameSpec),
    #[error("expected {0} stacks")]
    LengthMismatch(usize),
}

/// The `CN(8,6)` lemmas, in pipeline order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaTag {
    Valley,
    Trapezoid,
    DoubleMin1,
    DoubleMin2,
    MaxMin,
    Cleanup,
}

impl LemmaTag {
    pub const ALL: [LemmaTag; 6] = [
        LemmaTag::Valley,
        LemmaTag::Trapezoid,
        LemmaTag::DoubleMin1,
        LemmaTag::DoubleMin2,
        LemmaTag::MaxMin,
        LemmaTag::Cleanup,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LemmaTag::Valley => "VALLEY",
            LemmaTag::Trapezoid => "TRAPEZOID",
            LemmaTag::DoubleMin1 => "DMIN1",
            LemmaTag::DoubleMin2 => "DMIN2",
            LemmaTag::MaxMin => "MAXMIN",
            LemmaTag::Cleanup => "CLEANUP",
        }
    }
}

impl fmt::Display for LemmaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which generator produced a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// Closed-form move for the games other than `CN(8,6)`.
    Formula,
    Lemma(LemmaTag),
    /// Option search; means no generator applied.
    Fallback,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Formula => f.write_str("formula"),
            Route::Lemma(t) => write!(f, "{t}"),
            Route::Fallback => f.write_str("fallback"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningMove {
    pub mv: Move,
    pub target: Position,
    pub route: Route,
}

/// A move into the losing set of `spec`.
pub fn winning_move(spec: &GameSpec, pos: &Position) -> Result<Move, StrategyError> {
    winning_move_traced(spec, pos).map(|w| w.mv)
}

/// Like [`winning_move`], also reporting the target and the generator used.
pub fn winning_move_traced(spec: &GameSpec, pos: &Position) -> Result<WinningMove, StrategyError> {
    let game = CharacterizedGame::for_spec(spec).ok_or(StrategyError::Unsupported(*spec))?;
    if pos.len() != spec.n() {
        return Err(StrategyError::LengthMismatch(spec.n()));
    }
    if game.contains(pos.heights()) {
        return Err(StrategyError::NotApplicable);
    }
    let found = match game {
        CharacterizedGame::Nim => direct(spec, game, pos, nim_target(pos)),
        CharacterizedGame::WholeCircle => direct(spec, game, pos, Some(Position::zeros(spec.n()))),
        CharacterizedGame::AllButOne => direct(spec, game, pos, Some(Position::new(vec![pos.min(); spec.n()]))),
        CharacterizedGame::Cn42 => direct(spec, game, pos, Some(cn42_target(pos.heights()))),
        CharacterizedGame::Cn52 => first_verified(spec, game, pos, cn52_recipe),
        CharacterizedGame::Cn53 => first_verified(spec, game, pos, cn53_recipe),
        CharacterizedGame::Cn63 => first_verified(spec, game, pos, cn63_recipe),
        CharacterizedGame::Cn64 => first_verified(spec, game, pos, cn64_recipe),
        CharacterizedGame::Cn86 => {
            return Ok(cn86_pipeline(spec, pos).unwrap_or_else(|| fallback(spec, game, pos)));
        }
    };
    Ok(match found {
        Some((mv, target)) => WinningMove { mv, target, route: Route::Formula },
        None => fallback(spec, game, pos),
    })
}

fn fallback(spec: &GameSpec, game: CharacterizedGame, pos: &Position) -> WinningMove {
    let target = options(spec, pos)
        .into_iter()
        .find(|q| game.contains(q.heights()))
        .expect("losing set satisfies condition (II)");
    let mv = Move::between(spec, pos, &target).expect("options are reachable");
    WinningMove { mv, target, route: Route::Fallback }
}

fn direct(spec: &GameSpec, game: CharacterizedGame, pos: &Position, target: Option<Position>) -> Option<(Move, Position)> {
    let target = target?;
    if !game.contains(target.heights()) {
        return None;
    }
    Move::between(spec, pos, &target).map(|mv| (mv, target))
}

fn nim_target(pos: &Position) -> Option<Position> {
    let (i, v) = nim_zeroing_reduction(pos.heights())?;
    let mut h = pos.heights().to_vec();
    h[i] = v;
    Some(Position::new(h))
}

/// Each diagonal pair drops to its smaller member.
fn cn42_target(h: &[Height]) -> Position {
    let (a, b) = (h[0].min(h[2]), h[1].min(h[3]));
    Position::new(vec![a, b, a, b])
}

fn to_heights(v: &[i64]) -> Option<Vec<Height>> {
    v.iter().map(|&x| Height::try_from(x).ok()).collect()
}

/// Runs `recipe` on every relabeling of `pos` and returns the first target
/// that is a legal option of `pos` and lies in the losing set.
fn first_verified(
    spec: &GameSpec,
    game: CharacterizedGame,
    pos: &Position,
    recipe: impl Fn(&[i64]) -> Option<Vec<i64>>,
) -> Option<(Move, Position)> {
    first_verified_with(spec, game, pos, |q| recipe(q).map(|t| (t, ()))).map(|(m, p, _, _)| (m, p))
}

fn first_verified_with<T>(
    spec: &GameSpec,
    game: CharacterizedGame,
    pos: &Position,
    recipe: impl Fn(&[i64]) -> Option<(Vec<i64>, T)>,
) -> Option<(Move, Position, T, DihedralTransform)> {
    let h = pos.heights();
    let n = h.len();
    DihedralTransform::all(n).find_map(|t| {
        let image: Vec<i64> = (0..n).map(|i| h[t.source_index(i, n)] as i64).collect();
        let (target_image, extra) = recipe(&image)?;
        let target = Position::new(t.unapply(&to_heights(&target_image)?));
        if !game.contains(target.heights()) {
            return None;
        }
        let mv = Move::between(spec, pos, &target)?;
        Some((mv, target, extra, t))
    })
}

fn shift(v: Vec<i64>, by: i64) -> Vec<i64> {
    v.into_iter().map(|x| x + by).collect()
}

/// `CN(5,2)`: bring the minimum to 0, then split on whether the maximum is
/// next to it or one stack away.
fn cn52_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let low = *q.iter().min()?;
    let r: Vec<i64> = q.iter().map(|x| x - low).collect();
    let top = *r.iter().max()?;
    if r[0] != 0 {
        return None;
    }
    let target = if r[1] == top {
        let (w, x, y, z) = (r[1], r[2], r[3], r[4]);
        let _ = x;
        if w >= z + y {
            vec![0, z + y, 0, y, z]
        } else {
            vec![0, w, 0, w - z, z]
        }
    } else if r[2].max(r[3]) == top && r[1] >= r[4] {
        let (y, z) = (r[4], r[3]);
        let x = r[1] - r[4];
        if z >= x {
            vec![0, x + y, 0, x, y]
        } else {
            vec![0, z + y, 0, z, y]
        }
    } else {
        return None;
    };
    Some(shift(target, low))
}

/// `CN(5,3)`: minimum `m` at stack 0 and maximum adjacent (case table) or
/// one stack away.
fn cn53_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let m = q[0];
    let top = *q.iter().max()?;
    if q.iter().any(|&x| x < m) {
        return None;
    }
    if q[1] == top {
        let (x, y, z) = (q[2], q[3], q[4]);
        Some(if y - z >= m {
            vec![m, m + z, 0, m + z, z]
        } else if y - z >= 0 {
            vec![y - z, y, 0, y, z]
        } else if x > z - y {
            vec![0, z, z - y, y, z]
        } else {
            vec![0, x + y, x, y, x + y]
        })
    } else if q[2] == top {
        let (x, z) = (q[1], q[4]);
        Some(if x >= z - m { vec![m, z - m, z, 0, z] } else { vec![m, x, x + m, 0, x + m] })
    } else {
        None
    }
}

/// `CN(6,3)`: minimum at the last stack (shifted to 0) and `a+b >= d+e`.
fn cn63_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let low = q[5];
    if q.iter().any(|&x| x < low) {
        return None;
    }
    let (a, b, c, d, e) = (q[0] - low, q[1] - low, q[2] - low, q[3] - low, q[4] - low);
    if a + b < d + e {
        return None;
    }
    let t = if b > e {
        let m = a.min(d);
        vec![m, e, 0, m, e, 0]
    } else if c >= e - b {
        vec![d + e - b, b, e - b, d, e, 0]
    } else {
        vec![c + d, b, c, d, b + c, 0]
    };
    Some(shift(t, low))
}

/// `CN(6,4)`: pair each stack with its opposite; first zero the nim-sum of
/// the smaller members (the triangle), then equalise the pair differences.
fn cn64_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let nim = |v: [i64; 3]| nim_zeroing_reduction(&v.map(|x| x as Height)).map(|(i, w)| (i, w as i64));
    // smaller members at 1, 3, 5 alternating with the larger ones
    if q[0] >= q[3] && q[4] >= q[1] && q[2] >= q[5] {
        let mut low = [q[1], q[3], q[5]];
        if let Some((i, w)) = nim(low) {
            low[i] = w;
        }
        let [b, a, c] = low;
        let m = (q[0] - a).min(q[4] - b).min(q[2] - c);
        return Some(vec![a + m, b, c + m, a, b + m, c]);
    }
    // smaller members consecutive at 3, 4, 5
    if q[0] >= q[3] && q[1] >= q[4] && q[2] >= q[5] {
        let (a, b, c) = (q[3], q[4], q[5]);
        return Some(match nim([a, b, c]) {
            None => vec![a, b, c, a, b, c],
            Some((0, w)) => vec![w, b, c, w, b, c],
            Some((2, w)) => vec![a, b, w, a, b, w],
            Some((_, w)) => {
                // reduce the big partner of b below b; pairs alternate again
                let m = (q[0] - a).min(b - w).min(q[2] - c);
                vec![a + m, w, c + m, a, w + m, c]
            }
        });
    }
    None
}

type Labeled = [i64; 8];

fn labeled(q: &[i64]) -> Labeled {
    let mut out = [0; 8];
    out.copy_from_slice(&q[..8]);
    out
}

/// Four consecutive stacks `(a,b,c,d)` with `b + c <= min(a, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Valley {
    pub start: usize,
    pub stacks: [Height; 4],
    pub size: Height,
}

/// A valley of minimal size, smallest start among ties.
pub fn find_valley(pos: &Position) -> Option<Valley> {
    let h = pos.heights();
    let n = h.len();
    if n < 4 {
        return None;
    }
    (0..n)
        .filter_map(|start| {
            let s = [h[start], h[(start + 1) % n], h[(start + 2) % n], h[(start + 3) % n]];
            let size = s[1] + s[2];
            (size <= s[0].min(s[3])).then_some(Valley { start, stacks: s, size })
        })
        .min_by_key(|v| (v.size, v.start))
}

/// Valley at stacks 0..3 of minimal size `min_size`; stack 7 becomes the zero.
fn valley_recipe(q: &[i64], min_size: i64) -> Option<Vec<i64>> {
    let [a, b, c, d, e, f, g, _h] = labeled(q);
    let s = b + c;
    if s != min_size || s > a.min(d) {
        return None;
    }
    if f.max(g) >= s {
        if g < f {
            return None;
        }
        let f2 = f.min(s);
        let e2 = s - f2;
        if e2 > e {
            return None;
        }
        Some(vec![s, b, c, s.min(b + f2), e2, f2, s, 0])
    } else {
        if f > g {
            return None;
        }
        let b2 = b.min(g);
        let c2 = g - b2;
        Some(vec![g, b2, c2, g.min(b2 + f), g - f, f, g, 0])
    }
}

fn trapezoid_hypothesis(q: &Labeled) -> bool {
    let [a, _, c, _, _, f, _, h] = *q;
    a.max(h) <= f.min(c)
}

fn trapezoid_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let q = labeled(q);
    let [a, _b, c, d, e, f, g, h] = q;
    if !trapezoid_hypothesis(&q) || a < h {
        return None;
    }
    // otherwise (c,d,e,f) or (f,g,h,a) is a valley
    if d + e <= f.min(c) || g + h <= a {
        return None;
    }
    let d2 = d.min(a);
    let e2 = a - d2;
    Some(vec![a, 0, a, d2, e2, a.min(h + d2), a - h, h])
}

fn dmin1_hypothesis(q: &Labeled) -> bool {
    let [a, b, _, d, _, f, g, _] = *q;
    a <= d.min(f) && b <= a.min(g)
}

fn dmin1_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let q = labeled(q);
    let [a, b, c, _d, _e, _f, g, h] = q;
    if !dmin1_hypothesis(&q) || c < a - b || g + h < a {
        return None;
    }
    Some(if g >= a {
        vec![a, b, a - b, a, 0, a, a, 0]
    } else {
        vec![a, b, a - b, a, 0, a, g, a - g]
    })
}

fn dmin2_hypothesis(q: &Labeled) -> bool {
    let [a, b, _, d, e, _, g, _] = *q;
    a <= e.min(g) && b <= a.min(d)
}

fn dmin2_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let q = labeled(q);
    let [a, b, c, ..] = q;
    if !dmin2_hypothesis(&q) {
        return None;
    }
    Some(if b + c >= a {
        vec![a, b, a - b, b, a, 0, a, 0]
    } else {
        let s = b + c;
        vec![s, b, c, b, s, 0, s, 0]
    })
}

/// Admissible values of the new maximum `m` in the max-min construction.
/// Variant 1 keeps stacks `b, c` fixed, variant 2 keeps `c, d` fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxMinRange {
    pub variant: u8,
    pub lower: i64,
    pub upper: i64,
}

impl MaxMinRange {
    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    /// Target position for a given `m`, in the same labeling.
    pub fn target(&self, q: &[i64], m: i64) -> Vec<i64> {
        let [_, b, c, d, ..] = labeled(q);
        if self.variant == 1 {
            vec![m - b, b, c, 2 * m - b - c, b + c - m, m, 0, m]
        } else {
            vec![c + d - m, 2 * m - c - d, c, d, m - d, m, 0, m]
        }
    }
}

fn maxmin_range_labeled(q: &Labeled, variant: u8) -> MaxMinRange {
    let [a, b, c, d, e, f, _g, h] = *q;
    let half = (b + c + d).div_euclid(2);
    let (lower, upper) = if variant == 1 {
        (b.max(c).max(b + c - e), f.min(h).min(a + b).min(b + c).min(half))
    } else {
        (c.max(d).max(c + d - a), f.min(h).min(c + d).min(d + e).min(half))
    };
    MaxMinRange { variant, lower, upper }
}

/// Max-min bounds for `pos` as labeled (`variant` 1 or 2).
pub fn maxmin_range(pos: &Position, variant: u8) -> MaxMinRange {
    let q: Vec<i64> = pos.heights().iter().map(|&x| x as i64).collect();
    maxmin_range_labeled(&labeled(&q), variant)
}

/// Smallest admissible `m` whose target is a legal move.
fn maxmin_recipe(q: &[i64]) -> Option<Vec<i64>> {
    let l = labeled(q);
    for variant in [1, 2] {
        let r = maxmin_range_labeled(&l, variant);
        for m in r.lower.max(0)..=r.upper {
            let t = r.target(q, m);
            let legal = t.iter().zip(q).all(|(&x, &y)| 0 <= x && x <= y) && t.as_slice() != q;
            if legal {
                return Some(t);
            }
        }
    }
    None
}

fn cleanup_hypothesis(q: &Labeled) -> bool {
    let [a, b, c, d, e, f, g, h] = *q;
    let mu = b.min(h);
    f >= mu && mu >= d.max(e) && f >= c && c >= e && e >= g && d >= g && a <= c.min(d)
}

/// Rows of the clean-up case table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CleanupRow {
    /// `min(h,b) >= d+e-g`.
    MinCoversDeficit,
    /// `min(h,b) = h < d+e-g`.
    HBelowDeficit,
    /// `b < d+e-g`, `a+e <= c`, `m = a+b`.
    TightAB,
    /// ... `m = d+e`.
    TightDE,
    /// ... `m = f`.
    TightF,
    /// ... `m = h`.
    TightH,
    /// `a+e > c`, max-min template with `m = b+c-e`.
    WideMaxMin,
    /// `a+e > c`, `m > m* = f`.
    WideCapF,
    /// `a+e > c`, `m > m* = d+e`.
    WideCapDE,
    /// `m* = h`, `c+d-a <= h`.
    WideHatWithinH,
    /// `m* = h`, `c+d-a > h`.
    WideHatAboveH,
}

impl CleanupRow {
    pub const ALL: [CleanupRow; 11] = [
        CleanupRow::MinCoversDeficit,
        CleanupRow::HBelowDeficit,
        CleanupRow::TightAB,
        CleanupRow::TightDE,
        CleanupRow::TightF,
        CleanupRow::TightH,
        CleanupRow::WideMaxMin,
        CleanupRow::WideCapF,
        CleanupRow::WideCapDE,
        CleanupRow::WideHatWithinH,
        CleanupRow::WideHatAboveH,
    ];
}

/// The table row selected for a labeling satisfying the clean-up
/// hypothesis, and its target.
pub fn cleanup_row(q: &[i64]) -> Option<(CleanupRow, Vec<i64>)> {
    let l = labeled(q);
    if !cleanup_hypothesis(&l) {
        return None;
    }
    let [a, b, c, d, e, f, g, h] = l;
    let mu = h.min(b);
    let deficit = d + e - g;
    if mu >= deficit {
        let m = deficit;
        return Some((CleanupRow::MinCoversDeficit, vec![0, m, e - g, d, e, m - g, g, m]));
    }
    if h <= b {
        return Some((CleanupRow::HBelowDeficit, vec![0, h, e - g, h + g - e, e, h - g, g, h]));
    }
    if a + e <= c {
        let m = h.min(f).min(a + b).min(d + e);
        return Some(if m == a + b {
            let e2 = e.min(m);
            let d2 = m - e2;
            (CleanupRow::TightAB, vec![a, b, m.min(a + e2), d2, e2, m, 0, m])
        } else if m == d + e {
            let b2 = b.min(m);
            let a2 = m - b2;
            (CleanupRow::TightDE, vec![a2, b2, m.min(a2 + e), d, e, m, 0, m])
        } else if m == f {
            let b2 = b.min(m);
            let a2 = m - b2;
            (CleanupRow::TightF, vec![a2, b2, m.min(a2 + e), m - e, e, m, 0, m])
        } else {
            let e2 = e.min(m);
            (CleanupRow::TightH, vec![a, m - a, m.min(a + e2), m - e2, e2, m, 0, m])
        });
    }
    let m = b + c - e;
    let cap = h.min(f).min(a + b).min(b + c).min(d + e);
    Some(if cap == a + b || cap == b + c || (m <= cap && (cap == f || cap == d + e)) {
        (CleanupRow::WideMaxMin, vec![c - e, b, c, m - e, e, m, 0, m])
    } else if cap == f {
        (CleanupRow::WideCapF, vec![f - b, b, e + f - b, f - e, e, f, 0, f])
    } else if cap == d + e {
        let b2 = b.min(cap);
        let a2 = cap - b2;
        (CleanupRow::WideCapDE, vec![a2, b2, cap.min(e + a2), d, e, cap, 0, cap])
    } else {
        let hat = c + d - a;
        if hat <= h {
            (CleanupRow::WideHatWithinH, vec![a, c + d - 2 * a, c, d, c - a, hat, 0, hat])
        } else {
            (CleanupRow::WideHatAboveH, vec![a, h - a, a + h - d, d, h - d, h, 0, h])
        }
    })
}

/// A verified clean-up move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanupMove {
    pub mv: Move,
    pub target: Position,
    pub row: CleanupRow,
    pub transform: DihedralTransform,
}

/// The clean-up lemma's move for a `CN(8,6)` position.
pub fn cleanup_move(pos: &Position) -> Result<CleanupMove, StrategyError> {
    if pos.len() != 8 {
        return Err(StrategyError::LengthMismatch(8));
    }
    let spec = GameSpec::new(8, 6).expect("valid");
    first_verified_with(&spec, CharacterizedGame::Cn86, pos, |q| cleanup_row(q).map(|(r, t)| (t, r)))
        .map(|(mv, target, row, transform)| CleanupMove { mv, target, row, transform })
        .ok_or(StrategyError::NotApplicable)
}

fn labeled_image(pos: &Position, t: DihedralTransform) -> Labeled {
    let h = pos.heights();
    let mut q = [0i64; 8];
    for (i, slot) in q.iter_mut().enumerate() {
        *slot = h[t.source_index(i, 8)] as i64;
    }
    q
}

/// Whether the lemma's hypothesis holds for some relabeling of an
/// 8-stack position.
pub fn lemma_applicable(pos: &Position, tag: LemmaTag) -> bool {
    if pos.len() != 8 {
        return false;
    }
    if tag == LemmaTag::Valley {
        return find_valley(pos).is_some();
    }
    DihedralTransform::all(8).any(|t| {
        let q = labeled_image(pos, t);
        match tag {
            LemmaTag::Trapezoid => trapezoid_hypothesis(&q),
            LemmaTag::DoubleMin1 => dmin1_hypothesis(&q),
            LemmaTag::DoubleMin2 => dmin2_hypothesis(&q),
            LemmaTag::Cleanup => cleanup_hypothesis(&q),
            LemmaTag::MaxMin => [1, 2].iter().any(|&v| !maxmin_range_labeled(&q, v).is_empty()),
            LemmaTag::Valley => unreachable!(),
        }
    })
}

/// A verified move from one `CN(8,6)` lemma, if its construction applies.
pub fn lemma_move(pos: &Position, tag: LemmaTag) -> Option<(Move, Position)> {
    if pos.len() != 8 {
        return None;
    }
    let spec = GameSpec::new(8, 6).expect("valid");
    let game = CharacterizedGame::Cn86;
    match tag {
        LemmaTag::Valley => {
            let min_size = find_valley(pos)?.size as i64;
            first_verified(&spec, game, pos, |q| valley_recipe(q, min_size))
        }
        LemmaTag::Trapezoid => first_verified(&spec, game, pos, trapezoid_recipe),
        LemmaTag::DoubleMin1 => first_verified(&spec, game, pos, dmin1_recipe),
        LemmaTag::DoubleMin2 => first_verified(&spec, game, pos, dmin2_recipe),
        LemmaTag::MaxMin => first_verified(&spec, game, pos, maxmin_recipe),
        LemmaTag::Cleanup => cleanup_move(pos).ok().map(|c| (c.mv, c.target)),
    }
}

fn cn86_pipeline(_spec: &GameSpec, pos: &Position) -> Option<WinningMove> {
    LemmaTag::ALL.iter().find_map(|&tag| {
        lemma_move(pos, tag).map(|(mv, target)| WinningMove { mv, target, route: Route::Lemma(tag) })
    })
}
