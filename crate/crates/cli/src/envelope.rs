//! The structured record every command prints.

use std::path::Path;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::files::read_json;

/// Major version of the envelope layout. Fields are only ever added.
pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<C, O> {
    pub schema_version: String,
    pub toolkit_version: String,
    pub command: String,
    /// Command line as invoked.
    pub argv: Vec<String>,
    /// Fully resolved configuration, including the seed used.
    pub config: C,
    pub outcome: O,
    pub wall_time_seconds: f64,
}

impl<C, O> Envelope<C, O> {
    pub fn new(command: &str, config: C, outcome: O, elapsed: Duration) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            argv: std::env::args().collect(),
            config,
            outcome,
            wall_time_seconds: elapsed.as_secs_f64(),
        }
    }
}

impl<C: Serialize, O: Serialize> Envelope<C, O> {
    pub fn print(&self) {
        let text = serde_json::to_string_pretty(self).expect("envelopes serialize");
        println!("{text}");
    }
}

/// The configuration echoed by a previous `command` envelope.
pub fn replay_config<C: DeserializeOwned>(path: &Path, command: &str) -> CliResult<C> {
    let value: serde_json::Value = read_json(path)?;
    let major = |v: &str| v.split('.').next().map(str::to_string);
    match value.get("schema_version").and_then(|v| v.as_str()) {
        Some(v) if major(v) == major(SCHEMA_VERSION) => {}
        Some(v) => return Err(CliError::file(path, format!("unsupported schema version {v}"))),
        None => return Err(CliError::file(path, "not a result envelope")),
    }
    match value.get("command").and_then(|v| v.as_str()) {
        Some(c) if c == command => {}
        other => {
            return Err(CliError::Usage(format!(
                "{} holds a '{}' envelope, not '{command}'",
                path.display(),
                other.unwrap_or("?")
            )))
        }
    }
    let config = value.get("config").cloned().unwrap_or_default();
    serde_json::from_value(config).map_err(|e| CliError::file(path, format!("bad config: {e}")))
}
