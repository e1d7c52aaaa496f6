use std::time::Duration;

use multibrot_core::Config;
use serde::Serialize;

/// Record of one invocation, written to stderr.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    /// Absent when the arguments or configuration could not be read.
    pub config: Option<Config>,
    pub version: &'static str,
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
    pub exit_code: u8,
}

impl RunManifest {
    pub fn new(argv: &[String]) -> Self {
        RunManifest {
            command_line: argv.to_vec(),
            config: None,
            version: env!("CARGO_PKG_VERSION"),
            outputs: Vec::new(),
            duration_seconds: 0.0,
            exit_code: 0,
        }
    }

    pub fn finish(&mut self, code: u8, elapsed: Duration) {
        self.exit_code = code;
        self.duration_seconds = elapsed.as_secs_f64();
    }

    pub fn to_json(&self) -> String {
        let body = serde_json::to_string(self).expect("manifest serializes");
        format!("{{\"manifest\":{body}}}")
    }
}
