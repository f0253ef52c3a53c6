//! Artifact reading and atomic writing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use canonical24::branch::BranchConfig;
use canonical24::FORMAT_TAG;
use serde::Serialize;
use serde_json::Value;

use crate::Failure;

/// Write `value` as pretty JSON through a temporary file in the target
/// directory, then rename it into place.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = to_json(value)?;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| Failure::io(format!("cannot create a file in {}: {e}", dir.display())))?;
    tmp.write_all(text.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| Failure::io(format!("writing {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| Failure::io(format!("renaming into {}: {e}", path.display())))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Emit to `path`, or to stdout when no path is given.
pub fn emit<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    match path {
        Some(p) => write_json(p, value),
        None => {
            print!("{}", to_json(value)?);
            Ok(())
        }
    }
}

/// Read a branch configuration, either bare or wrapped in a `sample`
/// artifact under `"config"`. Parse errors name the offending field.
pub fn read_config(path: &Path) -> Result<BranchConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("reading {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::io(format!("{}: malformed JSON: {e}", path.display())))?;
    if let Some(tag) = value.get("format") {
        if tag != FORMAT_TAG {
            return Err(Failure::io(format!(
                "{}: field `format`: expected {FORMAT_TAG:?}, found {tag}",
                path.display()
            )));
        }
    }
    let (inner, prefix) = match value.get("config") {
        Some(c) => (c, "config."),
        None => (&value, ""),
    };
    serde_path_to_error::deserialize(inner).map_err(|e| {
        let field = e.path().to_string();
        Failure::io(format!(
            "{}: field `{prefix}{field}`: {}",
            path.display(),
            e.into_inner()
        ))
    })
}
