//! Report documents: a JSON envelope whose digest covers everything except
//! the generation time, CSV rendering, and all-or-nothing file output.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Output layout for report files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// JSON document with metadata and digest.
    #[value(name = "json-doc")]
    JsonDoc,
    Csv,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Document<T> {
    pub kind: String,
    pub tool_version: String,
    pub generated_at: String,
    /// SHA-256 over `kind`, `tool_version` and `body`.
    pub digest: String,
    pub body: T,
}

pub fn digest_of<T: Serialize>(kind: &str, body: &T) -> Result<String> {
    let bytes = serde_json::to_vec(&(kind, env!("CARGO_PKG_VERSION"), body))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

pub fn document<T: Serialize>(kind: &str, body: T) -> Result<Document<T>> {
    Ok(Document {
        kind: kind.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        digest: digest_of(kind, &body)?,
        body,
    })
}

impl<T: Serialize> Document<T> {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn digest_matches(&self) -> Result<bool> {
        Ok(digest_of(&self.kind, &self.body)? == self.digest)
    }
}

/// Serializes any `Display` value as a string; used for big integers.
pub fn as_string<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Header plus one row per item.
pub fn csv_string<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
