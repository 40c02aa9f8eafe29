use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Cli, Format};

/// Result of one subcommand in both output formats.
pub struct Payload {
    pub json: Value,
    pub text: String,
}

pub struct Envelope {
    command: &'static str,
    input_sha256: Option<String>,
    flags: Value,
    payload: Payload,
    wall_time_ms: Option<f64>,
}

impl Envelope {
    pub fn new(
        cli: &Cli,
        canonical_input: Option<&str>,
        payload: Payload,
        started: Instant,
    ) -> Self {
        let input_sha256 = canonical_input.map(|s| {
            Sha256::digest(s.as_bytes())
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect()
        });
        let flags = json!({
            "max_q_order": cli.max_q_order,
            "convention": format!("{:?}", cli.convention).to_lowercase(),
            "sign_convention": cli.sign_convention.convention().name(),
            "svg": cli.svg.as_ref().map(|p| p.display().to_string()),
        });
        let wall_time_ms = (!cli.omit_timing).then(|| started.elapsed().as_secs_f64() * 1000.0);
        Envelope {
            command: cli.command.name(),
            input_sha256,
            flags,
            payload,
            wall_time_ms,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let value = json!({
                    "command": self.command,
                    "input_sha256": self.input_sha256,
                    "flags": self.flags,
                    "payload": self.payload.json,
                    "wall_time_ms": self.wall_time_ms,
                });
                serde_json::to_string_pretty(&value).expect("envelopes serialize")
            }
            Format::Text => {
                let mut out = format!("command: {}\n", self.command);
                if let Some(h) = &self.input_sha256 {
                    out += &format!("input sha256: {h}\n");
                }
                let flags: Vec<String> = self
                    .flags
                    .as_object()
                    .into_iter()
                    .flatten()
                    .filter(|(_, v)| !v.is_null())
                    .map(|(k, v)| match v {
                        Value::String(s) => format!("{k}={s}"),
                        other => format!("{k}={other}"),
                    })
                    .collect();
                out += &format!("flags: {}\n", flags.join(" "));
                if let Some(ms) = self.wall_time_ms {
                    out += &format!("wall time: {ms:.3} ms\n");
                }
                out += "\n";
                out += self.payload.text.trim_end();
                out
            }
        }
    }
}
