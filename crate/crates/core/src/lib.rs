//! Deterministic engine for the BrainB Series 6 visual-complexity tracking
//! benchmark.
//!
//! A session runs at a fixed 100 ms tick. Every tick the boxes random-walk,
//! the changed-pixel complexity around the hero box is measured, the pointer
//! distance feeds the lost/found state machine, and the resulting command
//! raises or lowers the on-screen complexity. The finished session is written
//! in the classic BrainB text log layout.

pub mod analysis;
pub mod config;
pub mod error;
pub mod logkit;
pub mod meter;
pub mod protocol;
pub mod session;
pub mod trace;
pub mod tracker;
pub mod usersim;
pub mod world;

pub use config::{Rgb, SessionConfig};
pub use error::{ConfigError, FrameError, LogError, MeterError, SessionError, TraceError};
pub use logkit::{LogRecord, ParsedLog, Relation};
pub use meter::{Bitmap, ComplexityMeter};
pub use session::{PointerSample, Session, SessionResult, StateSnapshot, TickReport};
pub use trace::PointerTrace;
pub use tracker::{Command, EventLedger, TrackState, TrackerState};
pub use usersim::{run_headless, verify_replay, HeadlessRun, ModelKind, PointerAgent, PointerModel, ReplayVerdict};
pub use world::{BoxEntity, EngineRng, PixelPoint, WorldState};
