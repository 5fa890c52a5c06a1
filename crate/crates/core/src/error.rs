use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeterError {
    #[error("crop is {got_w}x{got_h}, meter window is {want_w}x{want_h}")]
    DimensionMismatch {
        got_w: u32,
        got_h: u32,
        want_w: u32,
        want_h: u32,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("session not finished ({elapsed}/{duration} ticks); pass force to save early")]
    NotFinished { elapsed: u64, duration: u64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum LogError {
    #[error("line {line}: unknown log version `{found}`")]
    UnknownVersion { line: usize, found: String },
    #[error("line {line}: missing `{field}`")]
    Missing { field: String, line: usize },
    #[error("line {line}: malformed number `{token}` in `{field}`")]
    MalformedNumber {
        field: String,
        token: String,
        line: usize,
    },
    #[error("line {line}: unexpected content `{content}`")]
    Unexpected { line: usize, content: String },
    #[error("record is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("pixel ({x},{y}) uses palette index {index}, palette has {len} colors")]
    PaletteIndex { x: u32, y: u32, index: u8, len: usize },
    #[error("png encoding failed: {0}")]
    Encode(#[from] image::ImageError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("line {line}: expected `tick x y down`, got `{content}`")]
    Syntax { line: usize, content: String },
    #[error("line {line}: {source}")]
    Config { line: usize, source: ConfigError },
}
