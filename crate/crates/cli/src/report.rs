use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub config_hash: String,
    pub config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub pass: bool,
    pub result: T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, config: &'a RunConfig, pass: bool, result: T, timestamp: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            config_hash: config.hash(),
            config,
            timestamp: timestamp.then(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
            pass,
            result,
        }
    }

    /// Pretty JSON to the configured report path, or stdout.
    pub fn emit(&self) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        match &self.config.outputs.report {
            Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {path}")),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

/// One CSV row of a sweep or suite.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub schema_version: u32,
    pub config_hash: String,
    pub family: String,
    pub parameters: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub deficit: Option<f64>,
    pub resolution: usize,
    pub note: Option<String>,
}

pub fn write_csv(rows: &[Row], path: Option<&str>) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("cannot write {p}"))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
