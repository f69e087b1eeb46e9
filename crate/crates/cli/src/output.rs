//! Artifact writing and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything needed to regenerate a run's artifacts byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    pub config: RunConfig,
    pub files: Vec<FileRecord>,
}

impl Manifest {
    /// `<out>/<stem>.manifest.json`; the stem is the command name unless the command
    /// distinguishes runs further.
    pub fn path_for(config: &RunConfig, stem: &str) -> PathBuf {
        config.output_dir.join(format!("{stem}.manifest.json"))
    }

    pub fn load(path: &Path) -> Option<Self> {
        serde_json::from_str(&fs::read_to_string(path).ok()?).ok()
    }

    /// True when the manifest was written for `config` and every listed file is intact.
    pub fn is_current(&self, config: &RunConfig) -> bool {
        self.version == env!("CARGO_PKG_VERSION")
            && &self.config == config
            && self.files.iter().all(|f| {
                fs::read(config.output_dir.join(&f.path)).map(|b| sha256_hex(&b) == f.sha256).unwrap_or(false)
            })
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A run in progress: resolved config, artifacts written so far and summary lines.
#[derive(Debug)]
pub struct Run {
    pub config: RunConfig,
    stem: String,
    files: Vec<FileRecord>,
    summary: Vec<String>,
}

impl Run {
    pub fn new(config: RunConfig, stem: String) -> Self {
        Self { config, stem, files: Vec::new(), summary: Vec::new() }
    }

    /// Record a line for standard output.
    pub fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn summary(&self) -> &[String] {
        &self.summary
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.config.output_dir)?;
        let path = self.config.output_dir.join(name);
        fs::write(&path, bytes)?;
        self.files.retain(|f| f.path != name);
        self.files.push(FileRecord { path: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
        Ok(path)
    }

    /// Rows as CSV with a header, or as a JSON array, following the run's format.
    pub fn write_rows<T: Serialize>(&mut self, stem: &str, rows: &[T]) -> Result<PathBuf, CliError> {
        let format = self.config.format;
        let bytes = match format {
            Format::Csv => csv_bytes(rows)?,
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(rows)?;
                s.push(b'\n');
                s
            }
        };
        self.write_bytes(&format!("{stem}.{}", format.extension()), &bytes)
    }

    pub fn write_json<T: Serialize>(&mut self, stem: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut s = serde_json::to_vec_pretty(value)?;
        s.push(b'\n');
        self.write_bytes(&format!("{stem}.json"), &s)
    }

    pub fn finish(self) -> Result<Manifest, CliError> {
        let manifest = Manifest {
            artifact: "dfsq".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: self.config.clone(),
            files: self.files,
        };
        fs::create_dir_all(&self.config.output_dir)?;
        let mut s = serde_json::to_vec_pretty(&manifest)?;
        s.push(b'\n');
        fs::write(Manifest::path_for(&self.config, &self.stem), s)?;
        Ok(manifest)
    }
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}
