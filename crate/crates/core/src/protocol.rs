//! Messages of the live session channel. Each message is one JSON object
//! tagged by `type`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::SessionConfig;
use crate::error::ConfigError;
use crate::session::StateSnapshot;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WireBox {
    pub id: u32,
    pub x: i64,
    pub y: i64,
    pub hw: u32,
    pub hh: u32,
    /// `#rrggbb` from the session palette.
    pub color: String,
    pub hero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ServerMessage {
    Snapshot {
        tick: u64,
        boxes: Vec<WireBox>,
        bps: u64,
        noc: usize,
        state: String,
        clock: String,
        paused: bool,
    },
    Result {
        kilobytes: f64,
        log: String,
    },
}

impl ServerMessage {
    pub fn snapshot(snapshot: &StateSnapshot, config: &SessionConfig) -> Self {
        let color = |i: u8| {
            config
                .palette
                .get(i as usize)
                .map_or_else(|| "#808080".to_string(), |c| c.to_string())
        };
        ServerMessage::Snapshot {
            tick: snapshot.tick,
            boxes: snapshot
                .boxes
                .iter()
                .map(|b| WireBox {
                    id: b.id,
                    x: b.x,
                    y: b.y,
                    hw: b.half_width,
                    hh: b.half_height,
                    color: color(b.color_index),
                    hero: b.is_hero,
                })
                .collect(),
            bps: snapshot.bps,
            noc: snapshot.noc,
            state: snapshot.state.as_str().to_string(),
            clock: snapshot.clock.clone(),
            paused: snapshot.paused,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ClientMessage {
    Pointer {
        x: i64,
        y: i64,
        down: bool,
    },
    Pause,
    Save,
    Start {
        #[serde(default)]
        config_overrides: Map<String, Value>,
    },
}

/// Result of decoding one inbound line.
#[derive(Clone, Debug, PartialEq)]
pub enum Inbound {
    Message(ClientMessage),
    /// A well-formed message whose `type` this server does not know.
    Unknown(String),
    Malformed(String),
}

pub fn decode_client(line: &str) -> Inbound {
    let value: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return Inbound::Malformed(e.to_string()),
    };
    let kind = match value.get("type").and_then(Value::as_str) {
        Some(k) => k.to_string(),
        None => return Inbound::Malformed("missing `type`".into()),
    };
    if !matches!(kind.as_str(), "pointer" | "pause" | "save" | "start") {
        return Inbound::Unknown(kind);
    }
    match serde_json::from_value(value) {
        Ok(msg) => Inbound::Message(msg),
        Err(e) => Inbound::Malformed(e.to_string()),
    }
}

/// Applies `config_overrides` using the same keys as config files.
pub fn apply_overrides(config: &mut SessionConfig, overrides: &Map<String, Value>) -> Result<(), ConfigError> {
    for (key, value) in overrides {
        let text = match value {
            Value::String(s) => s.clone(),
            Value::Array(items) => items
                .iter()
                .map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string))
                .collect::<Vec<_>>()
                .join(","),
            other => other.to_string(),
        };
        config.set(key, &text)?;
    }
    config.validate()
}
