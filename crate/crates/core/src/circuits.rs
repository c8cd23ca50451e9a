//! Circuits of the simplicial complex whose faces are the stack sets that
//! one move may touch.
//!
//! Vertices are numbered `1..=n` around the circle. A set is a face when it
//! fits in an arc of `k` consecutive vertices; a circuit is a minimal
//! non-face. With `s = n - k`, a set is a circuit exactly when every cyclic
//! gap is at most `s` and every two consecutive gaps sum to more than `s`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::game::GameSpec;

/// Largest `n` accepted by [`enumerate_circuits`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("vertex set must be a nonempty subset of 1..={n}")]
    InvalidVertexSet { n: usize },
    #[error("enumeration over n = {n} exceeds the limit of {limit}")]
    ResourceLimit { n: usize, limit: usize },
    #[error("circuit sizes need 1 < k < n, got {0}")]
    HypothesisViolated(GameSpec),
    #[error("size {ell} is outside {lower}..={upper}")]
    OutOfRange { ell: usize, lower: usize, upper: usize },
    #[error("construction for n = {n}, s = {s}, size {ell} failed verification")]
    ConstructionFailed { n: usize, s: usize, ell: usize },
}

/// A nonempty set of vertices of the `n`-cycle, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    vertices: Vec<usize>,
    n: usize,
}

impl VertexSet {
    /// Sorts and deduplicates `vertices`.
    pub fn new(n: usize, mut vertices: Vec<usize>) -> Result<Self, CircuitError> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() || vertices[0] == 0 || vertices[vertices.len() - 1] > n {
            return Err(CircuitError::InvalidVertexSet { n });
        }
        Ok(VertexSet { vertices, n })
    }

    /// Bit `i` of `mask` selects vertex `i + 1`; bits at or above `n` are ignored.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let vertices = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        VertexSet { vertices, n }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn without(&self, i: usize) -> Option<VertexSet> {
        let mut vertices = self.vertices.clone();
        vertices.remove(i);
        (!vertices.is_empty()).then_some(VertexSet { vertices, n: self.n })
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Cyclic gaps `d_i = v_{i+1} - v_i`, the last wrapping around; they sum to `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceSet(pub Vec<usize>);

impl DistanceSet {
    pub fn distances(&self) -> &[usize] {
        &self.0
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

pub fn distance_set(v: &VertexSet) -> DistanceSet {
    let xs = &v.vertices;
    let mut d: Vec<usize> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    d.push(xs[0] + v.n - xs[xs.len() - 1]);
    DistanceSet(d)
}

/// Length of the shortest arc containing `v`, counted in edges.
pub fn span(v: &VertexSet) -> usize {
    v.n - distance_set(v).max()
}

pub fn is_face(spec: &GameSpec, v: &VertexSet) -> bool {
    span(v) < spec.k()
}

/// Not a face, and removing any one vertex gives a face.
pub fn is_circuit_by_definition(spec: &GameSpec, v: &VertexSet) -> bool {
    !is_face(spec, v) && (0..v.len()).all(|i| v.without(i).is_none_or(|w| is_face(spec, &w)))
}

pub fn is_circuit_by_distances(spec: &GameSpec, v: &VertexSet) -> bool {
    gaps_form_circuit(&distance_set(v).0, spec.s())
}

fn gaps_form_circuit(d: &[usize], s: usize) -> bool {
    let m = d.len();
    d.iter().all(|&x| x <= s) && (0..m).all(|i| d[i] + d[(i + 1) % m] > s)
}

/// All circuits of `spec`, sorted lexicographically; `n` at most
/// [`DEFAULT_ENUMERATION_LIMIT`].
pub fn enumerate_circuits(spec: &GameSpec) -> Result<Vec<VertexSet>, CircuitError> {
    enumerate_circuits_limited(spec, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_circuits_limited(spec: &GameSpec, limit: usize) -> Result<Vec<VertexSet>, CircuitError> {
    let n = spec.n();
    if n > limit || n > 30 {
        return Err(CircuitError::ResourceLimit { n, limit });
    }
    let mut out: Vec<VertexSet> = (1u64..1 << n)
        .map(|mask| VertexSet::from_mask(n, mask))
        .filter(|v| is_circuit_by_distances(spec, v))
        .collect();
    out.sort_unstable_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(out)
}

/// Distinct circuit sizes of `spec`, by enumeration.
pub fn circuit_sizes(spec: &GameSpec) -> Result<BTreeSet<usize>, CircuitError> {
    Ok(enumerate_circuits(spec)?.iter().map(VertexSet::len).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircuitSizeRange {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub lower: usize,
    pub upper: usize,
}

impl CircuitSizeRange {
    pub fn contains(&self, ell: usize) -> bool {
        self.lower <= ell && ell <= self.upper
    }
}

impl fmt::Display for CircuitSizeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lower, self.upper)
    }
}

pub fn circuit_size_range(spec: &GameSpec) -> Result<CircuitSizeRange, CircuitError> {
    let (n, k) = (spec.n(), spec.k());
    if k <= 1 || k >= n {
        return Err(CircuitError::HypothesisViolated(*spec));
    }
    let s = n - k;
    Ok(CircuitSizeRange { n, k, s, lower: n.div_ceil(s), upper: 2 * n / (s + 1) })
}

/// Parameters of the constructions for a target size `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircuitConstruction {
    pub n: usize,
    pub s: usize,
    pub ell: usize,
    /// `n = a * ell + b`.
    pub a: usize,
    pub b: usize,
    pub half_low: usize,
    pub half_high: usize,
}

impl CircuitConstruction {
    pub fn new(n: usize, s: usize, ell: usize) -> Self {
        CircuitConstruction { n, s, ell, a: n / ell, b: n % ell, half_low: s.div_ceil(2), half_high: (s + 1).div_ceil(2) }
    }

    /// Gaps of `s`, then whatever is left.
    pub fn lower_set(&self) -> Vec<usize> {
        (0..self.n.div_ceil(self.s)).map(|j| j * self.s + 1).collect()
    }

    /// Alternating gaps `ceil((s+1)/2)`, `floor((s+1)/2)`, plus one extra
    /// vertex when the leftover arc is at least half of `s + 1`.
    pub fn upper_set(&self) -> Vec<usize> {
        let block = self.s + 1;
        let (m, r) = (self.n / block, self.n % block);
        let mut v: Vec<usize> = (0..m).flat_map(|j| [j * block + 1, j * block + 1 + self.half_high]).collect();
        if 2 * r >= block {
            v.push(m * block + 1);
        }
        v
    }

    /// `floor(j * n / ell) + 1`: gaps `a` and `a + 1`, spread evenly.
    pub fn balanced_set(&self) -> Vec<usize> {
        (0..self.ell).map(|j| j * self.n / self.ell + 1).collect()
    }
}

/// A circuit of `spec` with exactly `ell` vertices.
pub fn construct_circuit(spec: &GameSpec, ell: usize) -> Result<VertexSet, CircuitError> {
    let range = circuit_size_range(spec)?;
    if !range.contains(ell) {
        return Err(CircuitError::OutOfRange { ell, lower: range.lower, upper: range.upper });
    }
    let c = CircuitConstruction::new(range.n, range.s, ell);
    let vertices = if ell == range.lower {
        c.lower_set()
    } else if ell == range.upper {
        c.upper_set()
    } else {
        c.balanced_set()
    };
    let failed = CircuitError::ConstructionFailed { n: range.n, s: range.s, ell };
    let v = VertexSet::new(range.n, vertices).map_err(|_| failed.clone())?;
    if v.len() != ell || !is_circuit_by_distances(spec, &v) {
        return Err(failed);
    }
    Ok(v)
}

/// Same as [`construct_circuit`] for `k = n - s`.
pub fn construct_circuit_ns(n: usize, s: usize, ell: usize) -> Result<VertexSet, CircuitError> {
    let spec = GameSpec::new(n, n.saturating_sub(s)).map_err(|_| CircuitError::ConstructionFailed { n, s, ell })?;
    construct_circuit(&spec, ell)
}

/// Number of circuits of `CN(n,2)`: the non-adjacent pairs.
pub fn count_circuits_k2(n: usize) -> usize {
    n * (n - 3) / 2
}

/// `ceil(n/x) <= y` exactly when `ceil(n/y) <= x`.
pub fn ceiling_reciprocity_holds(n: u64, x: u64, y: u64) -> bool {
    (n.div_ceil(x) <= y) == (n.div_ceil(y) <= x)
}

/// With `n = a*s + b`, `0 <= b < s`: `floor(n/a) = s` when `b < a`, and
/// `floor(n/a) > s` otherwise.
pub fn first_double_floor_holds(n: u64, s: u64) -> bool {
    let (a, b) = (n / s, n % s);
    let back = n / a;
    if b < a {
        back == s
    } else {
        back > s
    }
}

/// With `ell = floor(n/(m+f))` and `n = a*ell + b`: `m = floor(n/ell)`
/// implies `b/ell >= f`. `half` selects `f = 1/2` instead of `f = 0`.
pub fn second_double_floor_holds(n: u64, m: u64, half: bool) -> bool {
    let ell = if half { 2 * n / (2 * m + 1) } else { n / m };
    let b = n % ell;
    let premise = n / ell == m;
    !premise || !half || 2 * b >= ell
}
