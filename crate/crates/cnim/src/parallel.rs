use cnim_core::game::GameSpec;
use cnim_core::solver::{solve_outcomes_with, OutcomeTable, ShellContext, ShellRunner, SolveLimits, SolverError};
use rayon::prelude::*;

/// Splits each shell across the rayon pool. Output order follows input
/// order, so tables are identical to sequential solves.
#[derive(Clone, Copy, Debug)]
pub struct Rayon {
    /// Shells smaller than this stay on the calling thread.
    pub min_parallel: usize,
}

impl Default for Rayon {
    fn default() -> Self {
        Rayon { min_parallel: 256 }
    }
}

impl ShellRunner for Rayon {
    fn run(&mut self, ctx: &ShellContext<'_>, shell: &[u32]) -> Vec<bool> {
        if shell.len() < self.min_parallel {
            return shell.iter().map(|&i| ctx.is_loss(i)).collect();
        }
        shell.par_iter().with_min_len(64).map(|&i| ctx.is_loss(i)).collect()
    }
}

pub fn solve_parallel(spec: &GameSpec, max_height: u16, limits: &SolveLimits) -> Result<OutcomeTable, SolverError> {
    solve_outcomes_with(spec, max_height, limits, &mut Rayon::default())
}
