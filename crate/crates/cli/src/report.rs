//! Command outcomes and their text and JSON renderings.

use std::time::Duration;

use serde_json::{json, Map, Value};

use ban_core::Configuration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Done,
    Pass,
    Fail,
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub lines: Vec<String>,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub witness: Option<Value>,
}

impl Outcome {
    pub fn new(status: Status, result: Value) -> Self {
        Outcome {
            status,
            lines: Vec::new(),
            inputs: Map::new(),
            result,
            witness: None,
        }
    }

    pub fn verdict(passed: bool, result: Value) -> Self {
        Outcome::new(if passed { Status::Pass } else { Status::Fail }, result)
    }

    pub fn line(mut self, text: impl Into<String>) -> Self {
        self.lines.push(text.into());
        self
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn witness(mut self, w: Option<Value>) -> Self {
        self.witness = w;
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Fail => 1,
            Status::Done | Status::Pass => 0,
        }
    }

    pub fn to_json(&self, command: &str, elapsed: Duration) -> String {
        let mut out = Map::new();
        out.insert("command".into(), json!(command));
        out.insert("inputs".into(), Value::Object(self.inputs.clone()));
        out.insert("result".into(), self.result.clone());
        if let Some(w) = &self.witness {
            out.insert("witness".into(), w.clone());
        }
        out.insert("timings".into(), json!({ "total_ms": elapsed.as_secs_f64() * 1e3 }));
        serde_json::to_string_pretty(&Value::Object(out)).expect("json values serialise")
    }
}

pub fn verdict_word(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `a=1,b=0`, or `-` for the empty configuration.
pub fn bits(x: &Configuration) -> String {
    if x.is_empty() {
        "-".into()
    } else {
        x.assignments()
    }
}

pub fn maybe_bit(b: Option<bool>) -> String {
    match b {
        Some(true) => "1".into(),
        Some(false) => "0".into(),
        None => "•".into(),
    }
}

pub fn maybe_bits(x: Option<&Configuration>) -> String {
    x.map_or_else(|| "•".into(), bits)
}
