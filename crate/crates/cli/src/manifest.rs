//! Output writing: every artifact is written atomically and followed by a
//! `<file>.manifest.json` naming the config digest and all input digests.

use std::path::{Path, PathBuf};

use molprompt::artifact::{sha256_hex, stamp_blob, write_atomic};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config_digest: String,
    seed: u64,
    config: &'a RunConfig,
    inputs: &'a [FileDigest],
    outputs: Vec<FileDigest>,
}

/// Collects inputs and outputs for one command run.
pub struct Run<'a> {
    pub command: &'static str,
    pub config: &'a RunConfig,
    pub config_digest: String,
    inputs: Vec<FileDigest>,
    outputs: Vec<(PathBuf, Vec<u8>)>,
}

impl<'a> Run<'a> {
    pub fn new(command: &'static str, config: &'a RunConfig) -> Self {
        Run {
            command,
            config,
            config_digest: config.digest(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input_bytes(&mut self, label: impl Into<String>, bytes: &[u8]) {
        self.input_digest(label, sha256_hex(bytes));
    }

    pub fn input_digest(&mut self, label: impl Into<String>, sha256: String) {
        self.inputs.push(FileDigest {
            path: label.into(),
            sha256,
        });
    }

    pub fn inputs(&self) -> Vec<(String, String)> {
        self.inputs.iter().map(|f| (f.path.clone(), f.sha256.clone())).collect()
    }

    /// One comment line for text artifacts.
    pub fn text_header(&self) -> String {
        format!(
            "# molprompt {} config={} seed={}\n",
            self.command, self.config_digest, self.config.seed
        )
    }

    /// Text artifact with a leading `#` comment naming the config digest.
    pub fn text(&mut self, path: &Path, body: &str) {
        let mut text = self.text_header();
        text.push_str(body);
        self.outputs.push((path.to_path_buf(), text.into_bytes()));
    }

    /// Header-blob artifact stamped with a `config` field.
    pub fn blob(&mut self, path: &Path, bytes: &[u8]) {
        let stamped = stamp_blob(bytes, "config", &self.config_digest);
        self.outputs.push((path.to_path_buf(), stamped));
    }

    /// JSON artifact: `{"config_digest": ..., "seed": ..., <key>: value}`.
    pub fn json<T: Serialize>(&mut self, path: &Path, key: &str, value: &T) {
        let mut obj = serde_json::Map::new();
        obj.insert("config_digest".into(), self.config_digest.clone().into());
        obj.insert("seed".into(), self.config.seed.into());
        obj.insert(key.into(), serde_json::to_value(value).expect("value serializes"));
        let mut text = serde_json::to_string_pretty(&obj).expect("json serializes");
        text.push('\n');
        self.outputs.push((path.to_path_buf(), text.into_bytes()));
    }

    /// Write every output, then one manifest beside the first output.
    pub fn finish(self) -> Result<Vec<PathBuf>, CliError> {
        let Some((first, _)) = self.outputs.first() else {
            return Ok(Vec::new());
        };
        let manifest_path = manifest_path(first);
        let mut written = Vec::new();
        let mut outputs = Vec::new();
        for (path, bytes) in &self.outputs {
            write_atomic(path, bytes).map_err(|e| CliError::io(path, e))?;
            outputs.push(FileDigest {
                path: path.display().to_string(),
                sha256: sha256_hex(bytes),
            });
            written.push(path.clone());
        }
        let manifest = Manifest {
            tool: "molprompt",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            config_digest: self.config_digest.clone(),
            seed: self.config.seed,
            config: self.config,
            inputs: &self.inputs,
            outputs,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        write_atomic(&manifest_path, text.as_bytes()).map_err(|e| CliError::io(&manifest_path, e))?;
        written.push(manifest_path);
        Ok(written)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}
