//! Run manifests: what was read, what was written, with which flags.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub flags: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub duration_seconds: f64,
    pub summary: serde_json::Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Performs a command's file I/O and remembers digests for the manifest.
pub struct Recorder {
    command: String,
    started: Instant,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
}

impl Recorder {
    pub fn new(command: &str) -> Self {
        Recorder {
            command: command.to_string(),
            started: Instant::now(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes)
            .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        }
        std::fs::write(path, contents)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    /// Writes the manifest next to `primary` unless `explicit` is given.
    pub fn finish(
        self,
        flags: &impl Serialize,
        summary: serde_json::Value,
        primary: &Path,
        explicit: Option<&Path>,
    ) -> Result<PathBuf, CliError> {
        let path = explicit.map(Path::to_path_buf).unwrap_or_else(|| {
            let mut name = primary.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        });
        let manifest = RunManifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            flags: serde_json::to_value(flags).expect("flags serialize"),
            inputs: self.inputs,
            outputs: self.outputs,
            duration_seconds: self.started.elapsed().as_secs_f64(),
            summary,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
