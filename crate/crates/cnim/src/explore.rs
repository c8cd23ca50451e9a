//! Searches over games without a known closed form.

use cnim_core::game::{canonicalize, GameSpec, Position};
use cnim_core::solver::{conjecture_counterexample_in, ConjectureCounterexample, OutcomeTable, SolveLimits, SolverError};

use crate::parallel::solve_parallel;

/// Losses in canonical form, ordered by token total, then lexicographically.
pub fn canonical_losses(table: &OutcomeTable) -> Vec<Position> {
    let mut out: Vec<Position> = table.losing_positions().filter(|p| canonicalize(p).0 == *p).collect();
    out.sort_by(|a, b| (a.total(), a).cmp(&(b.total(), b)));
    out
}

/// How many losses have no empty stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptyStackCheck {
    pub losses: usize,
    pub without_empty_stack: usize,
    pub first: Option<Position>,
}

pub fn empty_stack_check(table: &OutcomeTable) -> EmptyStackCheck {
    let mut check = EmptyStackCheck { losses: 0, without_empty_stack: 0, first: None };
    for p in table.losing_positions() {
        check.losses += 1;
        if Position::min(&p) > 0 {
            check.without_empty_stack += 1;
            check.first.get_or_insert(p);
        }
    }
    check
}

/// Solves `CN(2m,m)` at heights `1..=max_height` in turn and returns the
/// first height with a counterexample to the opposite-pair-sum guess.
pub fn search_conjecture(
    m: usize,
    max_height: u16,
    limits: &SolveLimits,
) -> Result<Option<(u16, ConjectureCounterexample)>, SolverError> {
    if m < 2 {
        return Err(SolverError::ConjectureSize(m));
    }
    let spec = GameSpec::new(2 * m, m).map_err(|_| SolverError::ConjectureSize(m))?;
    for h in 1..=max_height {
        let table = solve_parallel(&spec, h, limits)?;
        if let Some(c) = conjecture_counterexample_in(&table) {
            return Ok(Some((h, c)));
        }
    }
    Ok(None)
}
