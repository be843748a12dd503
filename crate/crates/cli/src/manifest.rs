use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::commands::UsageError;

pub const MANIFEST_VERSION: u32 = 1;

/// Flags naming files the command writes. They do not change the content of
/// any output, so they are left out of the configuration hash.
const OUTPUT_KEYS: [&str; 4] = ["out", "plot", "chains_csv", "dump_dir"];
/// Flags naming files the command reads. The hash covers their content.
const INPUT_KEYS: [&str; 2] = ["in", "table"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> Result<Self> {
        Ok(Self {
            path: path.to_path_buf(),
            sha256: sha256_file(path)?,
        })
    }

    /// Digest of a file the user asked us to read; a missing file is a
    /// usage error.
    pub fn of_input(path: &Path) -> Result<Self> {
        Ok(Self {
            path: path.to_path_buf(),
            sha256: sha256_input(path)?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub tool: String,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub config_hash: String,
    pub config: Command,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("hashing {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn sha256_input(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// SHA-256 of the canonical JSON of `command` with output paths removed and
/// input paths replaced by the digest of their content.
pub fn config_hash(command: &Command) -> Result<String> {
    let mut value = serde_json::to_value(command)?;
    if let Value::Object(map) = &mut value {
        for key in OUTPUT_KEYS {
            map.remove(key);
        }
        for key in INPUT_KEYS {
            if let Some(v) = map.get_mut(key) {
                *v = digest_paths(v)?;
            }
        }
    }
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(&value)?)))
}

fn digest_paths(v: &Value) -> Result<Value> {
    Ok(match v {
        Value::String(p) => Value::String(sha256_input(Path::new(p))?),
        Value::Array(items) => Value::Array(items.iter().map(digest_paths).collect::<Result<_>>()?),
        other => other.clone(),
    })
}

/// `<out>.manifest.json`.
pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut name = primary.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn write(path: &Path, manifest: &Manifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read(path: &Path) -> Result<Manifest> {
    let text = crate::input::read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("invalid manifest {}: {e}", path.display())).into())
}
