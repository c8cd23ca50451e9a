//! Directory of solved tables keyed by `(n, k, H, format version)`.

use std::fs;
use std::path::{Path, PathBuf};

use cnim_core::game::GameSpec;
use cnim_core::solver::{OutcomeTable, SolveLimits, SolverError};
use thiserror::Error;

use crate::parallel::solve_parallel;
use crate::table_file::{load_table_expecting, save_table, TableFileError, FORMAT_VERSION};

pub const CACHE_DIR_ENV: &str = "CNIM_CACHE_DIR";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    File(#[from] TableFileError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Solved,
    /// No cache directory configured.
    Uncached,
}

pub fn cache_file_name(spec: &GameSpec, h: u16) -> String {
    format!("cn{}-{}-h{}-v{}.cnim", spec.n(), spec.k(), h, FORMAT_VERSION)
}

pub fn cache_path(dir: &Path, spec: &GameSpec, h: u16) -> PathBuf {
    dir.join(cache_file_name(spec, h))
}

/// Loads the table from `dir` if present, otherwise solves (in parallel)
/// and stores it there.
pub fn solve_cached(
    spec: &GameSpec,
    h: u16,
    limits: &SolveLimits,
    dir: Option<&Path>,
) -> Result<(OutcomeTable, CacheStatus), CacheError> {
    let Some(dir) = dir else {
        return Ok((solve_parallel(spec, h, limits)?, CacheStatus::Uncached));
    };
    let path = cache_path(dir, spec, h);
    if path.exists() {
        return Ok((load_table_expecting(&path, spec, h)?, CacheStatus::Hit));
    }
    let table = solve_parallel(spec, h, limits)?;
    fs::create_dir_all(dir).map_err(TableFileError::from)?;
    save_table(&table, &path)?;
    Ok((table, CacheStatus::Solved))
}
