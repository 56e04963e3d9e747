//! Line-oriented file protocol for external generators.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::GeneratorError;
use crate::artifact::write_atomic;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub id: String,
    pub prompt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task_id: Option<String>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationBatch {
    pub id: String,
    #[serde(rename = "smiles")]
    pub smiles_list: Vec<String>,
}

/// How to reach the external generator. With a command, it is run as
/// `command... REQUEST_FILE RESPONSE_FILE`; without one, the bridge writes
/// the request file and waits for the response file to appear (the other
/// side should create it by rename).
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeConfig {
    pub command: Vec<String>,
    pub workdir: PathBuf,
    pub timeout: Duration,
}

impl BridgeConfig {
    pub fn new(command: Vec<String>, workdir: PathBuf) -> Self {
        BridgeConfig {
            command,
            workdir,
            timeout: Duration::from_secs(600),
        }
    }

    pub fn request_path(&self) -> PathBuf {
        self.workdir.join("requests.jsonl")
    }

    pub fn response_path(&self) -> PathBuf {
        self.workdir.join("responses.jsonl")
    }
}

const POLL: Duration = Duration::from_millis(20);

fn io_err(e: std::io::Error) -> GeneratorError {
    GeneratorError::Io(e.to_string())
}

fn wait_for_response(config: &BridgeConfig) -> Result<(), GeneratorError> {
    let response = config.response_path();
    let start = Instant::now();
    if config.command.is_empty() {
        while !response.exists() {
            if start.elapsed() > config.timeout {
                return Err(GeneratorError::BridgeTimeout(config.timeout));
            }
            std::thread::sleep(POLL);
        }
        return Ok(());
    }
    let mut child = Command::new(&config.command[0])
        .args(&config.command[1..])
        .arg(config.request_path())
        .arg(&response)
        .stdin(Stdio::null())
        .spawn()
        .map_err(|e| GeneratorError::Io(format!("{}: {e}", config.command[0])))?;
    loop {
        if let Some(status) = child.try_wait().map_err(io_err)? {
            if !status.success() {
                return Err(GeneratorError::Io(format!("bridge command exited with {status}")));
            }
            return Ok(());
        }
        if start.elapsed() > config.timeout {
            let _ = child.kill();
            let _ = child.wait();
            return Err(GeneratorError::BridgeTimeout(config.timeout));
        }
        std::thread::sleep(POLL);
    }
}

/// Parse response lines against the requests; batches come back in request
/// order.
pub fn parse_responses(text: &str, requests: &[GenerationRequest]) -> Result<Vec<GenerationBatch>, GeneratorError> {
    let wanted: HashMap<&str, usize> = requests.iter().map(|r| (r.id.as_str(), r.n)).collect();
    let mut got: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| GeneratorError::Protocol { line: i + 1, message };
        let batch: GenerationBatch = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let Some(&n) = wanted.get(batch.id.as_str()) else {
            return Err(bad(format!("unknown id {:?}", batch.id)));
        };
        if got.contains_key(&batch.id) {
            return Err(bad(format!("duplicate id {:?}", batch.id)));
        }
        let mut smiles = batch.smiles_list;
        if smiles.len() > n {
            log::warn!("bridge returned {} molecules for {:?}, keeping {n}", smiles.len(), batch.id);
            smiles.truncate(n);
        }
        got.insert(batch.id, smiles);
    }
    Ok(requests
        .iter()
        .map(|r| {
            let smiles_list = got.remove(&r.id).unwrap_or_else(|| {
                log::warn!("bridge returned nothing for {:?}", r.id);
                Vec::new()
            });
            GenerationBatch {
                id: r.id.clone(),
                smiles_list,
            }
        })
        .collect())
}

/// Send `requests` through the bridge. An empty request list returns
/// immediately without invoking anything.
pub fn external_generate(
    config: &BridgeConfig,
    requests: &[GenerationRequest],
) -> Result<Vec<GenerationBatch>, GeneratorError> {
    if requests.is_empty() {
        return Ok(Vec::new());
    }
    let mut text = String::new();
    for r in requests {
        text.push_str(&serde_json::to_string(r).expect("request serializes"));
        text.push('\n');
    }
    let response = config.response_path();
    if response.exists() {
        std::fs::remove_file(&response).map_err(io_err)?;
    }
    write_atomic(&config.request_path(), text.as_bytes()).map_err(io_err)?;
    wait_for_response(config)?;
    let body = std::fs::read_to_string(&response).map_err(io_err)?;
    parse_responses(&body, requests)
}
