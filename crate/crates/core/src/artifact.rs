//! File plumbing shared by every pipeline stage: atomic writes, content
//! digests and the "text header + binary body" container.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> io::Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

/// Write `bytes` to a sibling temp file, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = temp_path(path);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// A `key\tvalue` header introduced by a magic line and closed by a blank
/// line, followed by an opaque binary body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderBlob {
    pub magic: String,
    pub fields: Vec<(String, String)>,
    pub body: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlobError {
    #[error("expected magic line {expected:?}")]
    BadMagic { expected: String },
    #[error("header is not terminated by a blank line")]
    Unterminated,
    #[error("header is not valid UTF-8")]
    Encoding,
    #[error("missing header field {0}")]
    MissingField(String),
}

impl HeaderBlob {
    pub fn new(magic: &str) -> Self {
        HeaderBlob {
            magic: magic.to_string(),
            fields: Vec::new(),
            body: Vec::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        let v = value.to_string().replace(['\n', '\t'], " ");
        self.fields.push((key.to_string(), v));
        self
    }

    pub fn get(&self, key: &str) -> Result<&str, BlobError> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| BlobError::MissingField(key.to_string()))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("{}\n", self.magic).into_bytes();
        for (k, v) in &self.fields {
            out.extend_from_slice(format!("{k}\t{v}\n").as_bytes());
        }
        out.push(b'\n');
        out.extend_from_slice(&self.body);
        out
    }

    pub fn parse(data: &[u8], magic: &str) -> Result<Self, BlobError> {
        let split = data
            .windows(2)
            .position(|w| w == b"\n\n")
            .ok_or(BlobError::Unterminated)?;
        let header = std::str::from_utf8(&data[..split]).map_err(|_| BlobError::Encoding)?;
        let mut lines = header.lines();
        if lines.next() != Some(magic) {
            return Err(BlobError::BadMagic {
                expected: magic.to_string(),
            });
        }
        let fields = lines
            .filter_map(|l| l.split_once('\t'))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Ok(HeaderBlob {
            magic: magic.to_string(),
            fields,
            body: data[split + 2..].to_vec(),
        })
    }
}

/// Insert a `key\tvalue` field right after the magic line of a serialized
/// [`HeaderBlob`]. Readers ignore fields they do not know.
pub fn stamp_blob(bytes: &[u8], key: &str, value: &str) -> Vec<u8> {
    let at = bytes.iter().position(|&b| b == b'\n').map_or(bytes.len(), |i| i + 1);
    let mut out = bytes[..at].to_vec();
    out.extend_from_slice(format!("{key}\t{}\n", value.replace(['\n', '\t'], " ")).as_bytes());
    out.extend_from_slice(&bytes[at..]);
    out
}
