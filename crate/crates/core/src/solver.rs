//! Exhaustive win/loss classification of all positions up to a height bound.
//!
//! Positions with every stack at most `H` are numbered in mixed radix
//! `H + 1`, stack 0 least significant. Classification sweeps positions in
//! shells of equal token total: a position is a loss exactly when none of the
//! losses already found is one of its options. Every option has a strictly
//! smaller total, so a shell only depends on earlier shells and its members
//! can be classified independently (see [`ShellRunner`]).

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::game::{nim_sum, GameSpec, Height, Move, Position};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("state space of {positions} positions exceeds the budget of {limit}")]
    ResourceLimit { positions: u128, limit: u64 },
    #[error("heights above {max_height} (or wrong stack count) are outside the table")]
    OutOfRange { max_height: u16 },
    #[error("position is a loss for the player to move; no winning move exists")]
    NoWinningMove,
    #[error("table data has {found} bytes, expected {expected}")]
    BadTableLength { expected: usize, found: usize },
    #[error("diagonal-sum conjecture needs m >= 2, got {0}")]
    ConjectureSize(usize),
}

/// Result for the player about to move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Loss,
    Win,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Loss => "LOSS",
            Outcome::Win => "WIN",
        }
    }
}

impl core::fmt::Display for Outcome {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upper bound on the number of positions a table may hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_positions: u64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        Self { max_positions: 10_000_000 }
    }
}

impl SolveLimits {
    /// Largest `H` with `(H+1)^n` within the budget.
    pub fn default_height(&self, n: usize) -> u16 {
        let mut h: u16 = 0;
        while h < u16::MAX && position_count(n, h + 1).is_some_and(|c| c <= self.max_positions as u128) {
            h += 1;
        }
        h
    }
}

fn position_count(n: usize, h: u16) -> Option<u128> {
    (h as u128 + 1).checked_pow(n as u32)
}

/// Mixed-radix numbering of the positions with heights `<= max_height`.
#[derive(Clone, Debug)]
pub struct Indexer {
    n: usize,
    radix: u32,
    len: usize,
    place: Vec<u32>,
}

impl Indexer {
    pub fn new(spec: &GameSpec, max_height: u16, limits: &SolveLimits) -> Result<Self, SolverError> {
        let n = spec.n();
        let count = position_count(n, max_height).unwrap_or(u128::MAX);
        if count > limits.max_positions as u128 || count > u32::MAX as u128 {
            return Err(SolverError::ResourceLimit { positions: count, limit: limits.max_positions });
        }
        let radix = max_height as u32 + 1;
        let place = (0..n).map(|i| radix.pow(i as u32)).collect();
        Ok(Self { n, radix, len: count as usize, place })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index_of(&self, heights: &[Height]) -> Option<u32> {
        if heights.len() != self.n {
            return None;
        }
        let mut idx = 0u32;
        for (i, &h) in heights.iter().enumerate() {
            if h >= self.radix {
                return None;
            }
            idx += h * self.place[i];
        }
        Some(idx)
    }

    #[inline]
    pub fn decode_into(&self, mut index: u32, out: &mut [u16]) {
        for d in out.iter_mut().take(self.n) {
            *d = (index % self.radix) as u16;
            index /= self.radix;
        }
    }

    pub fn position(&self, index: u32) -> Position {
        let mut d = vec![0u16; self.n];
        self.decode_into(index, &mut d);
        Position::new(d.into_iter().map(Height::from).collect())
    }

    #[inline]
    pub fn place(&self, stack: usize) -> u32 {
        self.place[stack]
    }
}

/// Win/loss of every position with heights `<= max_height`; one bit per
/// position (bit `j` of byte `i` is index `8i + j`), set for a loss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeTable {
    spec: GameSpec,
    max_height: u16,
    bits: Vec<u8>,
}

impl OutcomeTable {
    /// Wraps raw bits, e.g. read back from disk.
    pub fn from_raw_parts(spec: GameSpec, max_height: u16, bits: Vec<u8>) -> Result<Self, SolverError> {
        let count = position_count(spec.n(), max_height).unwrap_or(u128::MAX);
        let expected = count.div_ceil(8);
        if expected != bits.len() as u128 {
            return Err(SolverError::BadTableLength {
                expected: usize::try_from(expected).unwrap_or(usize::MAX),
                found: bits.len(),
            });
        }
        Ok(Self { spec, max_height, bits })
    }

    pub fn spec(&self) -> GameSpec {
        self.spec
    }

    pub fn max_height(&self) -> u16 {
        self.max_height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn position_count(&self) -> usize {
        position_count(self.spec.n(), self.max_height).unwrap_or(0) as usize
    }

    #[inline]
    pub fn is_loss_index(&self, index: u32) -> bool {
        self.bits[index as usize / 8] >> (index % 8) & 1 == 1
    }

    fn radix(&self) -> u32 {
        self.max_height as u32 + 1
    }

    pub fn index_of(&self, pos: &Position) -> Result<u32, SolverError> {
        let h = pos.heights();
        if h.len() != self.spec.n() {
            return Err(SolverError::OutOfRange { max_height: self.max_height });
        }
        let r = self.radix();
        let mut idx = 0u32;
        let mut place = 1u32;
        for &x in h {
            if x >= r {
                return Err(SolverError::OutOfRange { max_height: self.max_height });
            }
            idx += x * place;
            place = place.wrapping_mul(r);
        }
        Ok(idx)
    }

    pub fn position_at(&self, mut index: u32) -> Position {
        let r = self.radix();
        let mut v = Vec::with_capacity(self.spec.n());
        for _ in 0..self.spec.n() {
            v.push(index % r);
            index /= r;
        }
        Position::new(v)
    }

    pub fn outcome(&self, pos: &Position) -> Result<Outcome, SolverError> {
        let i = self.index_of(pos)?;
        Ok(if self.is_loss_index(i) { Outcome::Loss } else { Outcome::Win })
    }

    pub fn loss_count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Losing positions in index order.
    pub fn losing_positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.position_count() as u32).filter(|&i| self.is_loss_index(i)).map(|i| self.position_at(i))
    }

    /// Whether this table answers for every position of `spec` up to `h`.
    pub fn covers(&self, spec: &GameSpec, h: u16) -> bool {
        self.spec == *spec && self.max_height >= h
    }
}

/// Losses found so far, in sweep order, stored flat with stride `n`.
#[derive(Clone, Debug, Default)]
pub struct LosingList {
    n: usize,
    heights: Vec<u16>,
}

impl LosingList {
    pub fn new(n: usize) -> Self {
        Self { n, heights: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.heights.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn push(&mut self, heights: &[u16]) {
        self.heights.extend_from_slice(heights);
    }

    pub fn iter(&self) -> core::slice::ChunksExact<'_, u16> {
        self.heights.chunks_exact(self.n.max(1))
    }
}

/// Answers "does this set of changed stacks fit in one window?" by table
/// lookup for small `n`.
#[derive(Clone, Debug)]
pub struct WindowTable {
    spec: GameSpec,
    lookup: Vec<bool>,
    masks: Vec<u64>,
}

impl WindowTable {
    const LOOKUP_MAX_N: usize = 20;

    pub fn new(spec: GameSpec) -> Self {
        let masks: Vec<u64> = spec.window_starts().map(|s| spec.window_mask(s)).collect();
        let lookup = if spec.n() <= Self::LOOKUP_MAX_N {
            (0..1u64 << spec.n()).map(|m| masks.iter().any(|w| m & !w == 0)).collect()
        } else {
            Vec::new()
        };
        Self { spec, lookup, masks }
    }

    #[inline]
    pub fn fits(&self, mask: u64) -> bool {
        if self.lookup.is_empty() {
            self.masks.iter().any(|w| mask & !w == 0)
        } else {
            self.lookup[mask as usize]
        }
    }

    pub fn spec(&self) -> GameSpec {
        self.spec
    }
}

/// Read-only state shared by everything classifying one shell.
pub struct ShellContext<'a> {
    pub indexer: &'a Indexer,
    pub windows: &'a WindowTable,
    pub losing: &'a LosingList,
}

impl ShellContext<'_> {
    /// True when no known loss is an option of position `index`.
    pub fn is_loss(&self, index: u32) -> bool {
        let mut p = [0u16; crate::game::MAX_STACKS];
        let n = self.windows.spec().n();
        self.indexer.decode_into(index, &mut p[..n]);
        let p = &p[..n];
        !self.losing.iter().any(|q| is_option(self.windows, p, q))
    }
}

/// `q` is an option of `p`: `q <= p` pointwise, `q != p`, and the stacks that
/// differ lie within one window.
#[inline]
pub fn is_option(windows: &WindowTable, p: &[u16], q: &[u16]) -> bool {
    let mut mask = 0u64;
    for i in 0..p.len() {
        if q[i] > p[i] {
            return false;
        }
        if q[i] < p[i] {
            mask |= 1 << i;
        }
    }
    mask != 0 && windows.fits(mask)
}

/// Strategy for classifying the positions of one shell. Implementations may
/// split the shell across workers but must return flags in input order.
pub trait ShellRunner {
    fn run(&mut self, ctx: &ShellContext<'_>, shell: &[u32]) -> Vec<bool>;
}

/// Classifies a shell on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl ShellRunner for Sequential {
    fn run(&mut self, ctx: &ShellContext<'_>, shell: &[u32]) -> Vec<bool> {
        shell.iter().map(|&i| ctx.is_loss(i)).collect()
    }
}

/// Indices grouped by token total; within a shell indices ascend.
fn shells(indexer: &Indexer, n: usize, max_height: u16) -> (Vec<u32>, Vec<usize>) {
    let max_total = n * max_height as usize;
    let mut totals = vec![0u32; indexer.len()];
    // going from i-1 to i, each trailing digit that wraps drops from H to 0
    // and one digit goes up by one
    let radix = max_height as u32 + 1;
    for i in 1..indexer.len() {
        let mut x = i as u32;
        let mut wrapped = 0u32;
        while x.is_multiple_of(radix) {
            wrapped += 1;
            x /= radix;
        }
        totals[i] = totals[i - 1] + 1 - wrapped * max_height as u32;
    }
    let mut bounds = vec![0usize; max_total + 2];
    for &t in &totals {
        bounds[t as usize + 1] += 1;
    }
    for t in 1..bounds.len() {
        bounds[t] += bounds[t - 1];
    }
    let mut fill = bounds.clone();
    let mut order = vec![0u32; indexer.len()];
    for (i, &t) in totals.iter().enumerate() {
        order[fill[t as usize]] = i as u32;
        fill[t as usize] += 1;
    }
    (order, bounds)
}

/// Solves `spec` for all heights `<= max_height` on the current thread.
pub fn solve_outcomes(spec: &GameSpec, max_height: u16, limits: &SolveLimits) -> Result<OutcomeTable, SolverError> {
    solve_outcomes_with(spec, max_height, limits, &mut Sequential)
}

/// Solves with a caller-supplied shell strategy. Losses found in a shell are
/// published to the losing list only after the whole shell is classified, so
/// any runner that preserves per-shell order gives the same table.
pub fn solve_outcomes_with<R: ShellRunner + ?Sized>(
    spec: &GameSpec,
    max_height: u16,
    limits: &SolveLimits,
    runner: &mut R,
) -> Result<OutcomeTable, SolverError> {
    let indexer = Indexer::new(spec, max_height, limits)?;
    let windows = WindowTable::new(*spec);
    let n = spec.n();
    let (order, bounds) = shells(&indexer, n, max_height);
    let mut bits = vec![0u8; indexer.len().div_ceil(8)];
    let mut losing = LosingList::new(n);
    let mut digits = vec![0u16; n];
    for t in 0..bounds.len() - 1 {
        let shell = &order[bounds[t]..bounds[t + 1]];
        if shell.is_empty() {
            continue;
        }
        let flags = {
            let ctx = ShellContext { indexer: &indexer, windows: &windows, losing: &losing };
            runner.run(&ctx, shell)
        };
        debug_assert_eq!(flags.len(), shell.len());
        for (&idx, &loss) in shell.iter().zip(&flags) {
            if loss {
                bits[idx as usize / 8] |= 1 << (idx % 8);
                indexer.decode_into(idx, &mut digits);
                losing.push(&digits);
            }
        }
    }
    Ok(OutcomeTable { spec: *spec, max_height, bits })
}

/// Grundy value of every position with heights `<= max_height`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrundyTable {
    spec: GameSpec,
    max_height: u16,
    values: Vec<u32>,
    indexer: Indexer,
}

impl GrundyTable {
    pub fn value(&self, pos: &Position) -> Result<u32, SolverError> {
        self.indexer
            .index_of(pos.heights())
            .map(|i| self.values[i as usize])
            .ok_or(SolverError::OutOfRange { max_height: self.max_height })
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn spec(&self) -> GameSpec {
        self.spec
    }

    pub fn position_at(&self, index: u32) -> Position {
        self.indexer.position(index)
    }
}

impl PartialEq for Indexer {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.radix == other.radix
    }
}

impl Eq for Indexer {}

/// Minimum excludant.
pub fn mex(values: &mut Vec<u32>) -> u32 {
    values.sort_unstable();
    values.dedup();
    values.iter().enumerate().find(|&(i, &v)| i as u32 != v).map_or(values.len() as u32, |(i, _)| i as u32)
}

/// Calls `f` with the index of every option of the position `index`
/// (decoded as `digits`), window by window; duplicates are possible.
fn for_each_option_index(spec: &GameSpec, indexer: &Indexer, index: u32, digits: &[u16], mut f: impl FnMut(u32, u32, &[u16]) -> bool) -> bool {
    let k = spec.k();
    let n = spec.n();
    let mut take = vec![0u16; k];
    for start in spec.window_starts() {
        take.iter_mut().for_each(|t| *t = 0);
        loop {
            let mut j = 0;
            let mut advanced = false;
            while j < k {
                let s = (start + j) % n;
                if take[j] < digits[s] {
                    take[j] += 1;
                    advanced = true;
                    break;
                }
                take[j] = 0;
                j += 1;
            }
            if !advanced {
                break;
            }
            let removed: u32 = (0..k).map(|j| take[j] as u32 * indexer.place((start + j) % n)).sum();
            if f(index - removed, start as u32, &take) {
                return true;
            }
        }
    }
    false
}

/// Grundy values by mex over options, in increasing index order (every
/// option has a smaller index).
pub fn grundy(spec: &GameSpec, max_height: u16, limits: &SolveLimits) -> Result<GrundyTable, SolverError> {
    let indexer = Indexer::new(spec, max_height, limits)?;
    let mut values = vec![0u32; indexer.len()];
    let mut digits = vec![0u16; spec.n()];
    let mut seen = Vec::new();
    for idx in 0..indexer.len() as u32 {
        indexer.decode_into(idx, &mut digits);
        seen.clear();
        for_each_option_index(spec, &indexer, idx, &digits, |q, _, _| {
            seen.push(values[q as usize]);
            false
        });
        values[idx as usize] = mex(&mut seen);
    }
    Ok(GrundyTable { spec: *spec, max_height, values, indexer })
}

/// First move (windows by start, removal vectors in odometer order) that
/// leads to a loss in `table`.
pub fn best_move_bruteforce(spec: &GameSpec, pos: &Position, table: &OutcomeTable) -> Result<Move, SolverError> {
    if table.spec() != *spec {
        return Err(SolverError::OutOfRange { max_height: table.max_height() });
    }
    let index = table.index_of(pos)?;
    if table.is_loss_index(index) {
        return Err(SolverError::NoWinningMove);
    }
    let indexer = Indexer::new(spec, table.max_height(), &SolveLimits { max_positions: u64::MAX })?;
    let digits: Vec<u16> = pos.heights().iter().map(|&h| h as u16).collect();
    let mut found = None;
    for_each_option_index(spec, &indexer, index, &digits, |q, start, take| {
        if table.is_loss_index(q) {
            found = Some(Move::new(start as usize, take.iter().map(|&t| t as Height).collect()));
            true
        } else {
            false
        }
    });
    // a win always has a losing option inside a complete table
    found.ok_or(SolverError::NoWinningMove)
}

/// For `CN(2m,m)`: every pair of adjacent stacks has the same sum as the
/// diametrically opposite pair.
pub fn opposite_pair_sums_equal(heights: &[Height]) -> bool {
    let n = heights.len();
    if n % 2 == 1 {
        return false;
    }
    let m = n / 2;
    (0..n).all(|i| heights[i] + heights[(i + 1) % n] == heights[(i + m) % n] + heights[(i + m + 1) % n])
}

/// A position where the opposite-pair-sum guess and the solver disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureCounterexample {
    pub position: Position,
    pub predicate: bool,
    pub outcome: Outcome,
}

/// Scans a solved `CN(2m,m)` table for the first disagreement (index order).
pub fn conjecture_counterexample_in(table: &OutcomeTable) -> Option<ConjectureCounterexample> {
    (0..table.position_count() as u32).find_map(|i| {
        let p = table.position_at(i);
        let predicate = opposite_pair_sums_equal(p.heights());
        let loss = table.is_loss_index(i);
        (predicate != loss).then_some(ConjectureCounterexample {
            position: p,
            predicate,
            outcome: if loss { Outcome::Loss } else { Outcome::Win },
        })
    })
}

/// Solves `CN(2m,m)` at `max_height` and looks for a counterexample to the
/// opposite-pair-sum guess.
pub fn find_conjecture_counterexample(m: usize, max_height: u16, limits: &SolveLimits) -> Result<Option<ConjectureCounterexample>, SolverError> {
    if m < 2 {
        return Err(SolverError::ConjectureSize(m));
    }
    let spec = GameSpec::new(2 * m, m).map_err(|_| SolverError::ConjectureSize(m))?;
    let table = solve_outcomes(&spec, max_height, limits)?;
    Ok(conjecture_counterexample_in(&table))
}

/// Nim-sum of the stacks, the Grundy value of `CN(n,1)`.
pub fn nim_value(pos: &Position) -> u32 {
    nim_sum(pos.heights())
}
