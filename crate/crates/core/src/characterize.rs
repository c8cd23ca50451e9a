//! Closed-form losing sets for the games with a known characterization.
//!
//! Each pattern is stated for one labeling of the circle; membership holds
//! when any of the `2n` rotations/reflections of a position matches.

use core::fmt;

use thiserror::Error;

use crate::game::{nim_sum, DihedralTransform, GameSpec, Height, Position};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum CharacterizeError {
    #[error("no closed-form losing set is known for {0}")]
    Unsupported(GameSpec),
    #[error("{0} expects {1} stacks")]
    LengthMismatch(GameSpec, usize),
}

/// The games whose losing sets are known in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharacterizedGame {
    /// `CN(n,1)`: plain Nim, losses have nim-sum zero.
    Nim,
    /// `CN(n,n)`: only the empty board loses.
    WholeCircle,
    /// `CN(n,n-1)`: losses are the constant positions.
    AllButOne,
    Cn42,
    Cn52,
    Cn53,
    Cn63,
    Cn64,
    Cn86,
}

impl CharacterizedGame {
    pub fn for_spec(spec: &GameSpec) -> Option<Self> {
        let (n, k) = (spec.n(), spec.k());
        Some(match (n, k) {
            (_, 1) => Self::Nim,
            _ if k == n => Self::WholeCircle,
            _ if k + 1 == n => Self::AllButOne,
            (4, 2) => Self::Cn42,
            (5, 2) => Self::Cn52,
            (5, 3) => Self::Cn53,
            (6, 3) => Self::Cn63,
            (6, 4) => Self::Cn64,
            (8, 6) => Self::Cn86,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Nim => "CN(n,1)",
            Self::WholeCircle => "CN(n,n)",
            Self::AllButOne => "CN(n,n-1)",
            Self::Cn42 => "CN(4,2)",
            Self::Cn52 => "CN(5,2)",
            Self::Cn53 => "CN(5,3)",
            Self::Cn63 => "CN(6,3)",
            Self::Cn64 => "CN(6,4)",
            Self::Cn86 => "CN(8,6)",
        }
    }

    /// Membership of an already length-checked height vector.
    pub fn contains(&self, h: &[Height]) -> bool {
        match self {
            Self::Nim => nim_sum(h) == 0,
            Self::WholeCircle => h.iter().all(|&x| x == 0),
            Self::AllButOne => h.windows(2).all(|w| w[0] == w[1]),
            Self::Cn42 => h[0] == h[2] && h[1] == h[3],
            Self::Cn52 => any_image(h, cn52_pattern),
            Self::Cn53 => any_image(h, cn53_pattern),
            Self::Cn63 => any_image(h, cn63_pattern),
            Self::Cn64 => any_image(h, cn64_pattern),
            Self::Cn86 => any_image(h, |q| cn86_match(q).is_some()),
        }
    }
}

impl fmt::Display for CharacterizedGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Up to 8 stacks copied into a fixed array under a transform.
fn image8(h: &[Height], t: DihedralTransform) -> [Height; 8] {
    let n = h.len();
    let mut q = [0; 8];
    for (i, slot) in q.iter_mut().enumerate().take(n) {
        *slot = h[t.source_index(i, n)];
    }
    q
}

fn any_image(h: &[Height], pattern: impl Fn(&[Height]) -> bool) -> bool {
    let n = h.len();
    DihedralTransform::all(n).any(|t| pattern(&image8(h, t)[..n]))
}

/// `(a*, b, c, d, b)` with `a* + b = c + d` and `a*` maximal.
fn cn52_pattern(q: &[Height]) -> bool {
    let (a, b, c, d, e) = (q[0], q[1], q[2], q[3], q[4]);
    b == e && a + b == c + d && q.iter().all(|&x| x <= a)
}

/// `(0, b, c, d, b)` with `b = c + d`.
fn cn53_pattern(q: &[Height]) -> bool {
    q[0] == 0 && q[1] == q[4] && q[1] == q[2] + q[3]
}

/// `a + b = d + e` and `b + c = e + f`.
fn cn63_pattern(q: &[Height]) -> bool {
    q[0] + q[1] == q[3] + q[4] && q[1] + q[2] == q[4] + q[5]
}

/// The `CN(6,3)` sums plus `a ^ c ^ e = 0` and `a = min(p)`.
fn cn64_pattern(q: &[Height]) -> bool {
    cn63_pattern(q) && q[0] ^ q[2] ^ q[4] == 0 && q.iter().all(|&x| q[0] <= x)
}

/// Parameters of a `CN(8,6)` loss `(0, x, a1, b1, e, b2, a2, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cn86Pattern {
    pub x: Height,
    pub a1: Height,
    pub b1: Height,
    pub e: Height,
    pub b2: Height,
    pub a2: Height,
}

fn cn86_match(q: &[Height]) -> Option<Cn86Pattern> {
    let (x, a1, b1, e, b2, a2) = (q[1], q[2], q[3], q[4], q[5], q[6]);
    (q[0] == 0 && q[7] == x && a1 + b1 == x && a2 + b2 == x && e == x.min(a1 + a2))
        .then_some(Cn86Pattern { x, a1, b1, e, b2, a2 })
}

/// The `CN(8,6)` pattern parameters and the transform exposing them.
pub fn cn86_pattern(pos: &Position) -> Option<(Cn86Pattern, DihedralTransform)> {
    let h = pos.heights();
    if h.len() != 8 {
        return None;
    }
    DihedralTransform::all(8).find_map(|t| cn86_match(&image8(h, t)).map(|m| (m, t)))
}

/// Whether `pos` lies in the closed-form losing set of `spec`.
pub fn membership(spec: &GameSpec, pos: &Position) -> Result<bool, CharacterizeError> {
    let game = CharacterizedGame::for_spec(spec).ok_or(CharacterizeError::Unsupported(*spec))?;
    if pos.len() != spec.n() {
        return Err(CharacterizeError::LengthMismatch(*spec, spec.n()));
    }
    Ok(game.contains(pos.heights()))
}

/// For a `CN(6,4)` loss whose minimum appears among both alternating
/// triples, the period-3 form `(a, b, c)` with `pos = (a,b,c,a,b,c)`.
pub fn two_minima_form(pos: &Position) -> Option<(Height, Height, Height)> {
    let h = pos.heights();
    if h.len() != 6 || !CharacterizedGame::Cn64.contains(h) {
        return None;
    }
    let min = pos.min();
    let in_even = [0, 2, 4].iter().any(|&i| h[i] == min);
    let in_odd = [1, 3, 5].iter().any(|&i| h[i] == min);
    if !(in_even && in_odd) {
        return None;
    }
    (h[0] == h[3] && h[1] == h[4] && h[2] == h[5]).then_some((h[0], h[1], h[2]))
}

/// Adds `m` to every stack.
pub fn translate(pos: &Position, m: i64) -> Result<Position, crate::game::GameError> {
    pos.translate(m)
}
