//! Pointer traces: one `tick x y down` line per tick.
//!
//! Comment lines carry the session config (`# config key = value`) and the
//! recorded events (`# event tick kind bps`) so a trace alone is enough to
//! re-run a session and locate where a replay diverges. `# pause tick` marks
//! a pause entered before that tick ran.

use std::fmt::Write as _;

use crate::config::SessionConfig;
use crate::error::TraceError;
use crate::session::PointerSample;
use crate::tracker::EventLedger;

pub const HEADER: &str = "# brainb pointer trace: tick x y down";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Lost,
    Found,
    LostToFound,
    FoundToLost,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Lost => "lost",
            EventKind::Found => "found",
            EventKind::LostToFound => "lost2found",
            EventKind::FoundToLost => "found2lost",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::Lost, Self::Found, Self::LostToFound, Self::FoundToLost]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceEvent {
    pub tick: u64,
    pub kind: EventKind,
    pub bps: u64,
}

/// Ledger entries in tick order.
pub fn ledger_events(ledger: &EventLedger) -> Vec<TraceEvent> {
    let columns = [
        (EventKind::Lost, &ledger.event_ticks_lost, &ledger.lost),
        (EventKind::Found, &ledger.event_ticks_found, &ledger.found),
        (EventKind::LostToFound, &ledger.event_ticks_lost2found, &ledger.lost2found),
        (EventKind::FoundToLost, &ledger.event_ticks_found2lost, &ledger.found2lost),
    ];
    let mut events: Vec<TraceEvent> = columns
        .iter()
        .flat_map(|(kind, ticks, values)| {
            ticks.iter().zip(values.iter()).map(|(&tick, &bps)| TraceEvent { tick, kind: *kind, bps })
        })
        .collect();
    events.sort();
    events
}

/// Tick of the first event that differs between two event lists.
pub fn first_divergence(expected: &[TraceEvent], actual: &[TraceEvent]) -> Option<u64> {
    let mismatch = expected.iter().zip(actual).find(|(a, b)| a != b);
    match mismatch {
        Some((a, b)) => Some(a.tick.min(b.tick)),
        None if expected.len() != actual.len() => {
            let n = expected.len().min(actual.len());
            expected.get(n).or(actual.get(n)).map(|e| e.tick)
        }
        None => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointerTrace {
    pub config: SessionConfig,
    pub samples: Vec<PointerSample>,
    pub events: Vec<TraceEvent>,
    pub pauses: Vec<u64>,
}

impl PointerTrace {
    pub fn new(config: SessionConfig, samples: Vec<PointerSample>, ledger: &EventLedger) -> Self {
        Self { config, samples, events: ledger_events(ledger), pauses: Vec::new() }
    }

    pub fn with_pauses(mut self, pauses: Vec<u64>) -> Self {
        self.pauses = pauses;
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        for line in self.config.to_kv_lines() {
            let _ = writeln!(out, "# config {line}");
        }
        for e in &self.events {
            let _ = writeln!(out, "# event {} {} {}", e.tick, e.kind.as_str(), e.bps);
        }
        for tick in &self.pauses {
            let _ = writeln!(out, "# pause {tick}");
        }
        for s in &self.samples {
            let _ = writeln!(out, "{} {} {} {}", s.tick, s.x, s.y, u8::from(s.button_down));
        }
        out
    }

    /// Parses a trace. Config lines are applied on top of `base`; other
    /// comments are ignored.
    pub fn parse(text: &str, base: &SessionConfig) -> Result<Self, TraceError> {
        let mut config = base.clone();
        let mut samples = Vec::new();
        let mut events = Vec::new();
        let mut pauses = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            let syntax = || TraceError::Syntax { line: line_no, content: line.to_string() };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(kv) = comment.strip_prefix("config ") {
                    let (key, value) = kv.split_once('=').ok_or_else(syntax)?;
                    config
                        .set(key, value)
                        .map_err(|source| TraceError::Config { line: line_no, source })?;
                } else if let Some(ev) = comment.strip_prefix("event ") {
                    let parts: Vec<&str> = ev.split_whitespace().collect();
                    let [tick, kind, bps] = parts[..] else { return Err(syntax()) };
                    events.push(TraceEvent {
                        tick: tick.parse().map_err(|_| syntax())?,
                        kind: EventKind::parse(kind).ok_or_else(syntax)?,
                        bps: bps.parse().map_err(|_| syntax())?,
                    });
                } else if let Some(tick) = comment.strip_prefix("pause ") {
                    pauses.push(tick.trim().parse().map_err(|_| syntax())?);
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [tick, x, y, down] = parts[..] else { return Err(syntax()) };
            samples.push(PointerSample {
                tick: tick.parse().map_err(|_| syntax())?,
                x: x.parse().map_err(|_| syntax())?,
                y: y.parse().map_err(|_| syntax())?,
                button_down: match down {
                    "1" => true,
                    "0" => false,
                    _ => return Err(syntax()),
                },
            });
        }
        config
            .validate()
            .map_err(|source| TraceError::Config { line: 0, source })?;
        events.sort();
        pauses.sort_unstable();
        Ok(Self { config, samples, events, pauses })
    }
}
