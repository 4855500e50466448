//! Output directory bookkeeping: every artifact carries the config hash, and
//! `<command>.run.json` lists each artifact with its content digest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Serialize)]
struct ArtifactEntry {
    path: String,
    sha256: String,
}

pub struct Artifacts {
    dir: PathBuf,
    command: String,
    config_hash: String,
    config: RunConfig,
    written: Vec<ArtifactEntry>,
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Artifacts {
    pub fn new(config: &RunConfig, command: &str) -> Result<Self> {
        let dir = config.out_dir.clone();
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Artifacts {
            dir,
            command: command.to_string(),
            config_hash: config.hash(),
            config: config.clone(),
            written: Vec::new(),
        })
    }

    /// Comment line for CSV/TSV headers.
    pub fn comment(&self, extra: &[String]) -> String {
        let mut lines = vec![format!("config_hash={} command={}", self.config_hash, self.command)];
        lines.extend(extra.iter().cloned());
        lines.join("\n")
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(ArtifactEntry {
            path: name.to_string(),
            sha256: hex_digest(bytes),
        });
        Ok(path)
    }

    pub fn csv<S: Serialize>(&mut self, name: &str, extra: &[String], rows: &[S]) -> Result<()> {
        let mut buf = Vec::new();
        convscale::report::write_csv(&mut buf, Some(&self.comment(extra)), rows)?;
        self.write_bytes(name, &buf)?;
        Ok(())
    }

    pub fn two_column(&mut self, name: &str, header: (&str, &str), points: &[(f64, f64)]) -> Result<()> {
        let mut buf = Vec::new();
        convscale::report::write_two_column(&mut buf, Some(&self.comment(&[])), header, points)?;
        self.write_bytes(name, &buf)?;
        Ok(())
    }

    /// Pretty JSON object with `config_hash` as its first field.
    pub fn json<S: Serialize>(&mut self, name: &str, value: &S) -> Result<()> {
        let mut map = serde_json::Map::new();
        map.insert("config_hash".into(), self.config_hash.clone().into());
        match serde_json::to_value(value)? {
            serde_json::Value::Object(fields) => map.extend(fields),
            other => {
                map.insert("value".into(), other);
            }
        }
        let mut text = serde_json::to_string_pretty(&map)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())?;
        Ok(())
    }

    /// Write `<command>.run.json` and append a timestamped line to `run.log`.
    pub fn finish(mut self) -> Result<()> {
        #[derive(Serialize)]
        struct Run<'a> {
            command: &'a str,
            config: &'a RunConfig,
            artifacts: &'a [ArtifactEntry],
        }
        let written = std::mem::take(&mut self.written);
        let command = self.command.clone();
        let config = self.config.clone();
        let run = Run {
            command: &command,
            config: &config,
            artifacts: &written,
        };
        self.json(&format!("{command}.run.json"), &run)?;

        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let log = self.dir.join("run.log");
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&log)
            .with_context(|| format!("opening {}", log.display()))?;
        writeln!(
            f,
            "{stamp} {} config_hash={} artifacts={}",
            self.command,
            self.config_hash,
            written.len()
        )?;
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
