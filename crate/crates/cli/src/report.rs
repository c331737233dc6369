//! Structured reports with a fixed key order.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use varobs::Tolerance;

use crate::CliError;

/// An input file read by a command, kept for the digest section.
pub struct Input {
    pub path: PathBuf,
    pub text: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Input, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                CliError::new("FILE_NOT_FOUND", format!("{}: no such file", path.display()))
            } else {
                CliError::new("FILE_NOT_FOUND", format!("{}: {e}", path.display()))
            }
        })?;
        Ok(Input { path: path.to_path_buf(), text })
    }

    pub fn digest(&self) -> String {
        format!("{:x}", Sha256::digest(self.text.as_bytes()))
    }
}

pub struct Report {
    command: String,
    args: Vec<String>,
    inputs: Vec<Value>,
    tolerance: Tolerance,
    verdicts: Map<String, Value>,
    data: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, args: &[String], tolerance: Tolerance) -> Report {
        Report {
            command: command.to_string(),
            args: args.to_vec(),
            inputs: Vec::new(),
            tolerance,
            verdicts: Map::new(),
            data: Map::new(),
        }
    }

    pub fn input(&mut self, input: &Input) {
        self.inputs.push(json!({ "path": input.path.display().to_string(), "sha256": input.digest() }));
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    pub fn data(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "args": self.args,
            "inputs": self.inputs,
            "tolerance": { "rel": self.tolerance.rel, "abs": self.tolerance.abs },
            "verdicts": self.verdicts,
            "data": self.data,
        })
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Integers that fit in 64 bits as JSON numbers, larger ones as strings.
pub fn big(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => Value::from(i),
        Err(_) => Value::String(v.to_string()),
    }
}

pub fn bigs(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(big).collect())
}
