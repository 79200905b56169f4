use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use qrdecomp::search::SearchConfig;
use qrdecomp::{Field, TOOL_VERSION};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
}

impl From<&Field> for FieldSpec {
    fn from(f: &Field) -> Self {
        FieldSpec {
            p: f.p(),
            n: f.n(),
            q: f.q(),
            modulus: f.modulus().to_vec(),
        }
    }
}

/// Everything needed to rerun a command; only `timestamp_unix_ms` varies
/// between identical runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub subcommand: String,
    pub seed: Option<u64>,
    pub field: Option<FieldSpec>,
    pub config: Option<SearchConfig>,
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    pub timestamp_unix_ms: u64,
}

impl RunManifest {
    pub fn new(argv: &[String], subcommand: &str) -> Self {
        RunManifest {
            command: argv.to_vec(),
            subcommand: subcommand.to_string(),
            seed: None,
            field: None,
            config: None,
            outputs: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
            timestamp_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `content` to `out` (or stdout) and, for file outputs, the
/// manifest alongside it.
pub fn emit(out: Option<&Path>, content: &str, mut manifest: RunManifest) -> Result<()> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
            manifest.outputs.push(path.to_path_buf());
            let mpath = manifest_path(path);
            let mut text = serde_json::to_string_pretty(&manifest)?;
            text.push('\n');
            std::fs::write(&mpath, text).with_context(|| format!("writing {}", mpath.display()))
        }
    }
}
