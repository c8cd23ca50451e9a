//! On-disk outcome tables.
//!
//! Layout: `b"CNIM"`, version `u8`, `n` `u8`, `k` `u8`, `H` `u16` little
//! endian, then the table's loss bitmap (bit `j` of byte `i` is position
//! `8i + j`).

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use cnim_core::game::GameSpec;
use cnim_core::solver::OutcomeTable;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"CNIM";
pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 9;

#[derive(Debug, Error)]
pub enum TableFileError {
    #[error("table file I/O failed: {0}")]
    Io(#[from] io::Error),
    #[error("not a valid table file: {0}")]
    FormatMismatch(String),
    #[error("table file holds CN({found_n},{found_k}) H={found_h}, expected CN({n},{k}) H={h}")]
    SpecMismatch { n: usize, k: usize, h: u16, found_n: usize, found_k: usize, found_h: u16 },
}

pub fn encode(table: &OutcomeTable) -> Vec<u8> {
    let spec = table.spec();
    let mut out = Vec::with_capacity(HEADER_LEN + table.bits().len());
    out.extend_from_slice(MAGIC);
    out.push(FORMAT_VERSION);
    out.push(spec.n() as u8);
    out.push(spec.k() as u8);
    out.extend_from_slice(&table.max_height().to_le_bytes());
    out.extend_from_slice(table.bits());
    out
}

pub fn decode(bytes: &[u8]) -> Result<OutcomeTable, TableFileError> {
    let bad = |m: &str| TableFileError::FormatMismatch(m.to_string());
    if bytes.len() < HEADER_LEN {
        return Err(bad("truncated header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(bad("bad magic"));
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(TableFileError::FormatMismatch(format!("unsupported version {}", bytes[4])));
    }
    let spec = GameSpec::new(bytes[5] as usize, bytes[6] as usize).map_err(|e| bad(&e.to_string()))?;
    let h = u16::from_le_bytes([bytes[7], bytes[8]]);
    OutcomeTable::from_raw_parts(spec, h, bytes[HEADER_LEN..].to_vec()).map_err(|e| bad(&e.to_string()))
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn save_table(table: &OutcomeTable, path: &Path) -> Result<(), TableFileError> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(table))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_table(path: &Path) -> Result<OutcomeTable, TableFileError> {
    decode(&fs::read(path)?)
}

/// Loads and checks that the file holds the requested game and height.
pub fn load_table_expecting(path: &Path, spec: &GameSpec, h: u16) -> Result<OutcomeTable, TableFileError> {
    let t = load_table(path)?;
    if t.spec() != *spec || t.max_height() != h {
        return Err(TableFileError::SpecMismatch {
            n: spec.n(),
            k: spec.k(),
            h,
            found_n: t.spec().n(),
            found_k: t.spec().k(),
            found_h: t.max_height(),
        });
    }
    Ok(t)
}
