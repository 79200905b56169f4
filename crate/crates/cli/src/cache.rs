//! Optional on-disk cache of per-field precomputation, enabled by
//! `QRDECOMP_CACHE_DIR`. Entries hold the modulus and primitive element;
//! the log/exp and character tables are rebuilt from them in one pass.

use std::path::PathBuf;

use anyhow::Result;
use qrdecomp::{Field, TOOL_VERSION};
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "QRDECOMP_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    p: u64,
    n: u32,
    modulus: Vec<u32>,
    generator: u32,
    tool_version: String,
}

fn entry_path(dir: &str, p: u64, n: u32) -> PathBuf {
    PathBuf::from(dir).join(format!("field-p{p}-n{n}-v{TOOL_VERSION}.json"))
}

fn from_cache(path: &PathBuf, p: u64, n: u32) -> Option<Field> {
    let text = std::fs::read_to_string(path).ok()?;
    let e: Entry = serde_json::from_str(&text).ok()?;
    if e.p != p || e.n != n || e.tool_version != TOOL_VERSION {
        return None;
    }
    Field::from_precomputed(p, n, &e.modulus, e.generator).ok()
}

pub fn load_field(p: u64, n: u32) -> Result<Field> {
    let Ok(dir) = std::env::var(CACHE_ENV) else {
        return Ok(Field::new(p, n)?);
    };
    let path = entry_path(&dir, p, n);
    if let Some(f) = from_cache(&path, p, n) {
        return Ok(f);
    }
    let field = Field::new(p, n)?;
    let entry = Entry {
        p,
        n,
        modulus: field.modulus().to_vec(),
        generator: field.generator(),
        tool_version: TOOL_VERSION.to_string(),
    };
    // the cache is best-effort: an unwritable directory only costs speed
    if std::fs::create_dir_all(&dir).is_ok() {
        let _ = std::fs::write(&path, serde_json::to_string(&entry)?);
    }
    Ok(field)
}
