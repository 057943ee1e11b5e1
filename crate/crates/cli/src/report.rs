//! Run reports and exit codes.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Positive,
    Negative,
    Error,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Positive => 0,
            Verdict::Negative => 1,
            Verdict::Error => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

/// Everything a command prints. Text mode shows `lines`; structured mode
/// prints the whole report as JSON. Nothing here depends on timing, so
/// repeated runs give identical output.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<InputFile>,
    pub verdict: Verdict,
    pub lines: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            verdict: Verdict::Positive,
            lines: Vec::new(),
            result: json!({}),
        }
    }

    /// Reads a file and records its hash.
    pub fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let bytes = std::fs::read(path)
            .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
        self.inputs.push(InputFile {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| anyhow::anyhow!("{} is not UTF-8", path.display()))
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.result
            .as_object_mut()
            .expect("result is an object")
            .insert(key.to_string(), v);
    }

    pub fn error(command: &'static str, inputs: Vec<InputFile>, err: &anyhow::Error) -> Self {
        let mut r = Report::new(command);
        r.inputs = inputs;
        r.verdict = Verdict::Error;
        r.line(format!("error: {err:#}"));
        r.set("error", format!("{err:#}"));
        r
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tool": "tva",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "exitCode": self.verdict.exit_code(),
            "result": self.result,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}
