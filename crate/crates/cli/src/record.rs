use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};

use crate::commands::Outcome;

/// Everything except `wall_time_s` is a function of the input and flags.
pub struct RunRecord {
    value: Value,
}

impl RunRecord {
    pub fn new(out: &Outcome, elapsed: Duration) -> Self {
        RunRecord {
            value: json!({
                "command": out.command,
                "input_digest": out.input_digest,
                "parameters": out.parameters,
                "results": out.results,
                "exit_code": out.code,
                "wall_time_s": elapsed.as_secs_f64(),
            }),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(&self.value).expect("serializable");
        std::fs::write(path, format!("{text}\n"))
    }
}
