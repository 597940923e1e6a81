use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::{Map, Value};

/// Record of one command run, written next to its outputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub settings: Map<String, Value>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            inputs: Vec::new(),
            settings: Map::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, p: &Path) {
        self.inputs.push(p.display().to_string());
    }

    pub fn output(&mut self, p: &Path) {
        self.outputs.push(p.display().to_string());
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.settings.insert(key.to_string(), v.into());
    }

    /// Writes `manifest.json` into `dir` (recording itself as an output).
    pub fn write(mut self, dir: &Path, elapsed: Duration) -> std::io::Result<PathBuf> {
        let path = dir.join("manifest.json");
        self.wall_time_seconds = elapsed.as_secs_f64();
        self.output(&path);
        let text = serde_json::to_string_pretty(&self).map_err(std::io::Error::other)?;
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}
