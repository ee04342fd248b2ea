//! Writing the CSV body and its JSON envelope.
//!
//! Both files are first written to hidden temporaries next to their targets
//! and renamed into place only after both writes succeeded, so readers never
//! see a torn file and a failed run leaves nothing behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ConfigError;
use crate::RunError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    /// Effective config, defaults included, in config-file syntax.
    pub config: String,
    pub seed: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub header: Header,
    pub summary: Value,
}

/// `out` with its extension replaced by `json`.
pub fn envelope_path(out: &Path) -> Result<PathBuf, ConfigError> {
    if out.file_name().is_none() {
        return Err(ConfigError::invalid("--out", format!("`{}` is not a file path", out.display())));
    }
    let sidecar = out.with_extension("json");
    if sidecar == out {
        return Err(ConfigError::invalid("--out", "the CSV body cannot use the .json extension"));
    }
    Ok(sidecar)
}

fn temp_path(target: &Path) -> PathBuf {
    let name = target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    target.with_file_name(format!(".{name}.{}.partial", std::process::id()))
}

fn write_file(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(contents)?;
    f.sync_all()
}

pub(crate) fn write_outputs(csv_path: &Path, json_path: &Path, csv: &str, envelope: &Envelope) -> Result<(), RunError> {
    let json = serde_json::to_string_pretty(envelope).expect("envelope serializes") + "\n";
    let pending = [(csv_path, temp_path(csv_path), csv.as_bytes()), (json_path, temp_path(json_path), json.as_bytes())];
    let cleanup = |placed: &[&Path]| {
        for (_, tmp, _) in &pending {
            let _ = fs::remove_file(tmp);
        }
        for p in placed {
            let _ = fs::remove_file(p);
        }
    };
    let fail = |path: &Path, source| RunError::Output { path: path.display().to_string(), source };

    for (target, tmp, bytes) in &pending {
        if let Err(e) = write_file(tmp, bytes) {
            cleanup(&[]);
            return Err(fail(target, e));
        }
    }
    let mut placed: Vec<&Path> = Vec::new();
    for (target, tmp, _) in &pending {
        if let Err(e) = fs::rename(tmp, target) {
            cleanup(&placed);
            return Err(fail(target, e));
        }
        placed.push(target);
    }
    Ok(())
}
