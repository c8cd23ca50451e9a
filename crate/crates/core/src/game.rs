//! Value types and move rules for circular Nim `CN(n,k)`.
//!
//! Stacks sit on a circle and are stored clockwise starting from the stack at
//! 12 o'clock. Internally every index is 0-based; the text formats
//! (`start=<i>` in moves) use 1-based stack numbers.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Number of tokens on one stack.
pub type Height = u32;

/// Largest supported number of stacks (window masks are `u64`).
pub const MAX_STACKS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid game CN({n},{k}): need 1 <= k <= n <= {max}", max = MAX_STACKS)]
    InvalidSpec { n: usize, k: usize },
    #[error("expected {expected} stacks, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("illegal move: {0}")]
    IllegalMove(IllegalMove),
    #[error("cannot parse {what}: {reason}")]
    Parse { what: &'static str, reason: String },
    #[error("translation would make stack {index} negative")]
    NegativeHeight { index: usize },
}

/// Why a move was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IllegalMove {
    NoTokensRemoved,
    WindowWidth { expected: usize, found: usize },
    StartOutOfRange { start: usize, n: usize },
    ExceedsStack { stack: usize, height: Height, removal: Height },
}

impl fmt::Display for IllegalMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IllegalMove::NoTokensRemoved => f.write_str("at least one token must be removed"),
            IllegalMove::WindowWidth { expected, found } => {
                write!(f, "expected {expected} removal amounts, found {found}")
            }
            IllegalMove::StartOutOfRange { start, n } => {
                write!(f, "window start {} is not a stack of a {n}-stack game", start + 1)
            }
            IllegalMove::ExceedsStack { stack, height, removal } => write!(
                f,
                "cannot take {removal} tokens from stack {} holding {height}",
                stack + 1
            ),
        }
    }
}

/// The game `CN(n,k)`: `n` stacks on a circle, moves act on `k` consecutive stacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameSpec {
    n: usize,
    k: usize,
}

impl GameSpec {
    pub fn new(n: usize, k: usize) -> Result<Self, GameError> {
        if n == 0 || k == 0 || k > n || n > MAX_STACKS {
            return Err(GameError::InvalidSpec { n, k });
        }
        Ok(Self { n, k })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of stacks outside any playing window, `n - k`.
    #[inline]
    pub fn s(&self) -> usize {
        self.n - self.k
    }

    /// Distinct window start indices. When `k == n` every start covers the
    /// whole circle, so only start 0 is reported.
    pub fn window_starts(&self) -> core::ops::Range<usize> {
        if self.k == self.n {
            0..1
        } else {
            0..self.n
        }
    }

    /// Bit mask of the stacks covered by the window starting at `start`.
    pub fn window_mask(&self, start: usize) -> u64 {
        (0..self.k).fold(0u64, |m, j| m | 1u64 << ((start + j) % self.n))
    }

    /// Whether all stacks in `mask` lie inside one cyclic window.
    pub fn fits_window(&self, mask: u64) -> bool {
        self.window_starts().any(|s| mask & !self.window_mask(s) == 0)
    }

    /// Smallest window start whose window contains `mask`.
    pub fn window_containing(&self, mask: u64) -> Option<usize> {
        self.window_starts().find(|&s| mask & !self.window_mask(s) == 0)
    }

    pub fn check_len(&self, len: usize) -> Result<(), GameError> {
        if len == self.n {
            Ok(())
        } else {
            Err(GameError::LengthMismatch { expected: self.n, found: len })
        }
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CN({},{})", self.n, self.k)
    }
}

/// Stack heights in clockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<Height>);

impl Position {
    pub fn new(heights: Vec<Height>) -> Self {
        Self(heights)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn heights(&self) -> &[Height] {
        &self.0
    }

    pub fn into_heights(self) -> Vec<Height> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&h| h as u64).sum()
    }

    pub fn min(&self) -> Height {
        self.0.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> Height {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// The final position: no tokens left.
    pub fn is_final(&self) -> bool {
        self.0.iter().all(|&h| h == 0)
    }

    /// Adds `m` to every stack (`m` may be negative).
    pub fn translate(&self, m: i64) -> Result<Position, GameError> {
        self.0
            .iter()
            .enumerate()
            .map(|(index, &h)| {
                let v = h as i64 + m;
                if v < 0 {
                    Err(GameError::NegativeHeight { index })
                } else {
                    Ok(v as Height)
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl From<Vec<Height>> for Position {
    fn from(v: Vec<Height>) -> Self {
        Self(v)
    }
}

impl From<&[Height]> for Position {
    fn from(v: &[Height]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_list(f, &self.0)?;
        f.write_str(")")
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, values: &[Height]) -> fmt::Result {
    for (i, h) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{h}")?;
    }
    Ok(())
}

fn parse_list(s: &str, what: &'static str) -> Result<Vec<Height>, GameError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim().parse::<Height>().map_err(|e| GameError::Parse {
                what,
                reason: alloc::format!("{:?}: {e}", t.trim()),
            })
        })
        .collect()
}

impl FromStr for Position {
    type Err = GameError;

    /// Parses `"(1,3,5)"`; whitespace anywhere is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| GameError::Parse {
                what: "position",
                reason: "expected parenthesised list like (1,2,3)".into(),
            })?;
        let heights = parse_list(inner, "position")?;
        if heights.is_empty() {
            return Err(GameError::Parse { what: "position", reason: "no stacks".into() });
        }
        Ok(Position(heights))
    }
}

/// A move: a window start (0-based) and the tokens taken from each of the
/// `k` stacks `start, start+1, ..` modulo `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub start: usize,
    pub removals: Vec<Height>,
}

impl Move {
    pub fn new(start: usize, removals: Vec<Height>) -> Self {
        Self { start, removals }
    }

    pub fn total_removed(&self) -> u64 {
        self.removals.iter().map(|&r| r as u64).sum()
    }

    /// The move taking `from` to `to`, if `to` is an option of `from`.
    /// When several windows contain the changed stacks the one with the
    /// smallest start is reported.
    pub fn between(spec: &GameSpec, from: &Position, to: &Position) -> Option<Move> {
        let (a, b) = (from.heights(), to.heights());
        if a.len() != spec.n() || b.len() != spec.n() {
            return None;
        }
        let mut mask = 0u64;
        for i in 0..a.len() {
            if b[i] > a[i] {
                return None;
            }
            if b[i] < a[i] {
                mask |= 1 << i;
            }
        }
        if mask == 0 {
            return None;
        }
        let start = spec.window_containing(mask)?;
        let removals = (0..spec.k())
            .map(|j| {
                let i = (start + j) % spec.n();
                a[i] - b[i]
            })
            .collect();
        Some(Move { start, removals })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "start={}; take=", self.start + 1)?;
        write_list(f, &self.removals)
    }
}

impl FromStr for Move {
    type Err = GameError;

    /// Parses `"start=<i>; take=<r1,...,rk>"` with a 1-based start.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| GameError::Parse { what: "move", reason: reason.into() };
        let (lhs, rhs) = s.split_once(';').ok_or_else(|| bad("expected `start=<i>; take=<...>`"))?;
        let start = lhs
            .trim()
            .strip_prefix("start")
            .and_then(|r| r.trim_start().strip_prefix('='))
            .ok_or_else(|| bad("missing `start=`"))?
            .trim()
            .parse::<usize>()
            .map_err(|_| bad("start is not a number"))?;
        if start == 0 {
            return Err(bad("stacks are numbered from 1"));
        }
        let take = rhs
            .trim()
            .strip_prefix("take")
            .and_then(|r| r.trim_start().strip_prefix('='))
            .ok_or_else(|| bad("missing `take=`"))?;
        Ok(Move { start: start - 1, removals: parse_list(take, "move")? })
    }
}

/// Checks `mv` against `pos` and returns the resulting position.
pub fn apply_move(spec: &GameSpec, pos: &Position, mv: &Move) -> Result<Position, GameError> {
    spec.check_len(pos.len())?;
    if mv.removals.len() != spec.k() {
        return Err(GameError::IllegalMove(IllegalMove::WindowWidth {
            expected: spec.k(),
            found: mv.removals.len(),
        }));
    }
    if mv.start >= spec.n() {
        return Err(GameError::IllegalMove(IllegalMove::StartOutOfRange {
            start: mv.start,
            n: spec.n(),
        }));
    }
    if mv.total_removed() == 0 {
        return Err(GameError::IllegalMove(IllegalMove::NoTokensRemoved));
    }
    let mut next = pos.0.clone();
    for (j, &r) in mv.removals.iter().enumerate() {
        let stack = (mv.start + j) % spec.n();
        let height = next[stack];
        if r > height {
            return Err(GameError::IllegalMove(IllegalMove::ExceedsStack {
                stack,
                height,
                removal: r,
            }));
        }
        next[stack] = height - r;
    }
    Ok(Position(next))
}

/// All positions reachable in one move, deduplicated.
pub fn options(spec: &GameSpec, pos: &Position) -> BTreeSet<Position> {
    let mut out = BTreeSet::new();
    let h = pos.heights();
    if h.len() != spec.n() {
        return out;
    }
    for start in spec.window_starts() {
        let stacks: Vec<usize> = (0..spec.k()).map(|j| (start + j) % spec.n()).collect();
        let mut take = vec![0 as Height; spec.k()];
        // odometer over all removal vectors of this window
        'outer: loop {
            let mut j = 0;
            loop {
                if j == take.len() {
                    break 'outer;
                }
                if take[j] < h[stacks[j]] {
                    take[j] += 1;
                    break;
                }
                take[j] = 0;
                j += 1;
            }
            let mut q = h.to_vec();
            for (t, &s) in take.iter().zip(&stacks) {
                q[s] -= t;
            }
            out.insert(Position(q));
        }
    }
    out
}

/// Number of distinct options of `pos`, without listing them.
///
/// Distinct options correspond to pairs (support, amounts) where the support
/// is a nonempty set of stacks inside one window. Only practical for `n <= 24`.
pub fn option_count(spec: &GameSpec, pos: &Position) -> u128 {
    let n = spec.n();
    assert!(n <= 24, "option_count enumerates 2^n supports");
    let h = pos.heights();
    let mut total = 0u128;
    for mask in 1u64..(1u64 << n) {
        if !spec.fits_window(mask) {
            continue;
        }
        let mut prod = 1u128;
        for (i, &hi) in h.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = prod.saturating_mul(hi as u128);
            }
        }
        total = total.saturating_add(prod);
    }
    total
}

/// One of the `2n` rotations/reflections of the circle.
///
/// The image of `p` is `image[i] = p[(rotation + i) mod n]`, or
/// `p[(rotation - i) mod n]` when reflected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct DihedralTransform {
    pub rotation: usize,
    pub reflected: bool,
}

impl DihedralTransform {
    pub const IDENTITY: Self = Self { rotation: 0, reflected: false };

    /// All `2n` transforms: rotations first, then reflections.
    pub fn all(n: usize) -> impl Iterator<Item = DihedralTransform> + Clone {
        (0..2 * n).map(move |i| DihedralTransform { rotation: i % n, reflected: i >= n })
    }

    /// Index of the source stack that lands at image position `i`.
    #[inline]
    pub fn source_index(&self, i: usize, n: usize) -> usize {
        if self.reflected {
            (self.rotation + n - i % n) % n
        } else {
            (self.rotation + i) % n
        }
    }

    pub fn apply<T: Copy>(&self, values: &[T]) -> Vec<T> {
        let n = values.len();
        (0..n).map(|i| values[self.source_index(i, n)]).collect()
    }

    /// Inverse of [`apply`](Self::apply).
    pub fn unapply<T: Copy + Default>(&self, image: &[T]) -> Vec<T> {
        let n = image.len();
        let mut out = vec![T::default(); n];
        for (i, &v) in image.iter().enumerate() {
            out[self.source_index(i, n)] = v;
        }
        out
    }

    pub fn apply_position(&self, pos: &Position) -> Position {
        Position(self.apply(pos.heights()))
    }
}

/// Lexicographically smallest image of `pos` and a transform producing it
/// (the first one in [`DihedralTransform::all`] order).
pub fn canonicalize(pos: &Position) -> (Position, DihedralTransform) {
    let n = pos.len();
    if n == 0 {
        return (pos.clone(), DihedralTransform::IDENTITY);
    }
    let mut best = pos.0.clone();
    let mut best_t = DihedralTransform::IDENTITY;
    for t in DihedralTransform::all(n).skip(1) {
        let img = t.apply(&pos.0);
        if img < best {
            best = img;
            best_t = t;
        }
    }
    (Position(best), best_t)
}

/// Carry-free binary sum (XOR fold); 0 for an empty slice.
pub fn nim_sum(values: &[Height]) -> Height {
    values.iter().fold(0, |acc, &v| acc ^ v)
}

/// A single-entry reduction making the nim-sum zero: `(index, new_value)`
/// with `new_value < values[index]`, smallest such index. `None` when the
/// nim-sum is already zero.
pub fn nim_zeroing_reduction(values: &[Height]) -> Option<(usize, Height)> {
    let x = nim_sum(values);
    if x == 0 {
        return None;
    }
    values.iter().enumerate().find_map(|(i, &v)| {
        let w = v ^ x;
        (w < v).then_some((i, w))
    })
}
