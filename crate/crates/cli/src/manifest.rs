use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use bmv_core::matcore::MatrixFile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of_bytes(path: &str, bytes: &[u8]) -> Self {
        Self {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Everything needed to replay a run. Wall-clock duration is only embedded
/// when asked for, since it would break byte-identical replays.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub duration_ms: Option<u128>,
}

impl RunManifest {
    pub fn new(subcommand: &str, params: Value) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            params,
            seeds: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            duration_ms: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let files = |v: &[FileDigest]| -> Value {
            Value::Array(v.iter().map(|d| json!({"path": d.path, "sha256": d.sha256})).collect())
        };
        let mut m = json!({
            "subcommand": self.subcommand,
            "params": self.params,
            "seeds": self.seeds,
            "tool_version": self.tool_version,
            "inputs": files(&self.inputs),
            "outputs": files(&self.outputs),
        });
        if let Some(ms) = self.duration_ms {
            m["duration_ms"] = json!(ms as u64);
        }
        m
    }

    /// Reads a matrix file, recording its digest. Errors name the path.
    pub fn read_matrix(&mut self, path: &Path) -> Result<MatrixFile, CliError> {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{shown}: {e}")))?;
        self.inputs.push(FileDigest::of_bytes(&shown, &bytes));
        let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{shown}: {e}")))?;
        MatrixFile::from_json_str(text).map_err(|e| CliError::Input(format!("{shown}: {e}")))
    }

    /// Reads any JSON input, recording its digest.
    pub fn read_json(&mut self, path: &Path) -> Result<Value, CliError> {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{shown}: {e}")))?;
        self.inputs.push(FileDigest::of_bytes(&shown, &bytes));
        serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("{shown}: {e}")))
    }

    /// Writes an output file, recording its digest.
    pub fn write_file(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        let shown = path.display().to_string();
        std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{shown}: {e}")))?;
        self.outputs.push(FileDigest::of_bytes(&shown, contents.as_bytes()));
        Ok(())
    }
}
