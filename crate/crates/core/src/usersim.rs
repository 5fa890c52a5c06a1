//! Scripted pointer models and the free-running headless runner.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::config::SessionConfig;
use crate::error::ConfigError;
use crate::meter::Bitmap;
use crate::session::{PointerSample, Session, StateSnapshot};
use crate::logkit::write_log;
use crate::trace::{first_divergence, PointerTrace};
use crate::tracker::EventLedger;
use crate::world::{EngineRng, PixelPoint};
use crate::LogRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Exactly on the hero every tick.
    Perfect,
    /// Parked in the top-left corner.
    Absent,
    /// Follows the hero late and with jitter.
    LaggedNoisy,
    /// Tracks like `LaggedNoisy` until the complexity exceeds its capacity,
    /// then drifts off toward a corner.
    Capacity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointerModel {
    pub kind: ModelKind,
    pub latency_ticks: usize,
    pub noise_sigma: f64,
    pub capacity_bps: u64,
    /// Consecutive below-capacity ticks needed before tracking resumes.
    pub reacquire_ticks: u32,
    pub drift_px_per_tick: i64,
}

impl PointerModel {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            latency_ticks: 0,
            noise_sigma: 0.0,
            capacity_bps: 0,
            reacquire_ticks: 0,
            drift_px_per_tick: 12,
        }
    }

    pub fn perfect() -> Self {
        Self::new(ModelKind::Perfect)
    }

    pub fn absent() -> Self {
        Self::new(ModelKind::Absent)
    }

    pub fn lagged_noisy(latency_ticks: usize, noise_sigma: f64) -> Self {
        Self { latency_ticks, noise_sigma, ..Self::new(ModelKind::LaggedNoisy) }
    }

    /// Default capacity tracker: 2 px jitter, no lag, 5 ticks to reacquire.
    pub fn capacity(capacity_bps: u64) -> Self {
        Self {
            capacity_bps,
            noise_sigma: 2.0,
            reacquire_ticks: 5,
            ..Self::new(ModelKind::Capacity)
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) || self.drift_px_per_tick < 0 {
            return Err(ConfigError::Invalid("pointer model parameters must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Tracking,
    Drifting { corner: PixelPoint, calm_ticks: u32 },
}

/// A pointer model together with the state it carries between ticks.
#[derive(Clone, Debug)]
pub struct PointerAgent {
    pub model: PointerModel,
    seen: VecDeque<PixelPoint>,
    last: Option<PixelPoint>,
    phase: Phase,
    noise: Option<Normal<f64>>,
}

impl PointerAgent {
    pub fn new(model: PointerModel) -> Self {
        let noise = (model.noise_sigma > 0.0).then(|| Normal::new(0.0, model.noise_sigma).expect("sigma > 0"));
        Self {
            seen: VecDeque::with_capacity(model.latency_ticks + 1),
            model,
            last: None,
            phase: Phase::Tracking,
            noise,
        }
    }

    fn jitter(&self, rng: &mut EngineRng) -> i64 {
        match &self.noise {
            Some(normal) => {
                let limit = 3.0 * self.model.noise_sigma;
                normal.sample(rng).clamp(-limit, limit).round() as i64
            }
            None => 0,
        }
    }

    fn tracked(&mut self, rng: &mut EngineRng) -> PixelPoint {
        let target = self.seen.front().copied().unwrap_or_default();
        let dx = self.jitter(rng);
        let dy = self.jitter(rng);
        PixelPoint::new(target.x + dx, target.y + dy)
    }

    fn drift(&self, from: PixelPoint, corner: PixelPoint) -> PixelPoint {
        let rate = self.model.drift_px_per_tick;
        let toward = |a: i64, b: i64| a + (b - a).clamp(-rate, rate);
        PixelPoint::new(toward(from.x, corner.x), toward(from.y, corner.y))
    }

    /// Chooses the pointer for the tick that will judge `snapshot`.
    pub fn step(&mut self, snapshot: &StateSnapshot, rng: &mut EngineRng) -> PointerSample {
        self.seen.push_back(snapshot.hero);
        while self.seen.len() > self.model.latency_ticks + 1 {
            self.seen.pop_front();
        }
        let point = match self.model.kind {
            ModelKind::Perfect => snapshot.hero,
            ModelKind::Absent => PixelPoint::new(0, 0),
            ModelKind::LaggedNoisy => self.tracked(rng),
            ModelKind::Capacity => self.capacity_step(snapshot, rng),
        };
        self.last = Some(point);
        PointerSample { x: point.x, y: point.y, button_down: true, tick: snapshot.tick }
    }

    fn capacity_step(&mut self, snapshot: &StateSnapshot, rng: &mut EngineRng) -> PixelPoint {
        let overloaded = snapshot.bps >= self.model.capacity_bps;
        if let Phase::Drifting { corner, calm_ticks } = self.phase {
            let calm_ticks = if overloaded { 0 } else { calm_ticks + 1 };
            if calm_ticks <= self.model.reacquire_ticks {
                self.phase = Phase::Drifting { corner, calm_ticks };
                return self.drift(self.last.unwrap_or(snapshot.hero), corner);
            }
            self.phase = Phase::Tracking;
        }
        if overloaded {
            let corner = farthest_corner(snapshot.hero, snapshot.width, snapshot.height);
            self.phase = Phase::Drifting { corner, calm_ticks: 0 };
            return self.drift(self.last.unwrap_or(snapshot.hero), corner);
        }
        self.tracked(rng)
    }
}

fn farthest_corner(p: PixelPoint, width: u32, height: u32) -> PixelPoint {
    let x = if p.x * 2 < i64::from(width) { i64::from(width) - 1 } else { 0 };
    let y = if p.y * 2 < i64::from(height) { i64::from(height) - 1 } else { 0 };
    PixelPoint::new(x, y)
}

/// Convenience wrapper matching the single-call form.
pub fn model_step(agent: &mut PointerAgent, snapshot: &StateSnapshot, rng: &mut EngineRng) -> PointerSample {
    agent.step(snapshot, rng)
}

/// Everything a headless run produces.
#[derive(Clone, Debug)]
pub struct HeadlessRun {
    pub record: LogRecord,
    pub ledger: EventLedger,
    pub frame: Bitmap,
    pub trace: PointerTrace,
    /// Meter output of every executed tick.
    pub bps_series: Vec<u64>,
}

/// Generator for the pointer model, independent of the world's stream.
pub fn model_rng(seed: u64) -> EngineRng {
    let mut rng = EngineRng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Runs a whole session as fast as possible with `config.rng_seed = seed`.
pub fn run_headless(config: &SessionConfig, model: &PointerModel, seed: u64) -> Result<HeadlessRun, ConfigError> {
    model.validate()?;
    let config = SessionConfig { rng_seed: seed, ..config.clone() };
    let mut session = Session::new(config.clone())?;
    let mut agent = PointerAgent::new(model.clone());
    let mut rng = model_rng(seed);
    let mut samples = Vec::with_capacity(config.duration_ticks as usize);
    let mut bps_series = Vec::with_capacity(config.duration_ticks as usize);
    while !session.is_finished() {
        let sample = agent.step(&session.lookahead(), &mut rng);
        samples.push(sample);
        if let Some(report) = session.run_tick(sample) {
            bps_series.push(report.bps);
        }
    }
    let result = session.finalize(false).expect("session ran to completion");
    Ok(HeadlessRun {
        trace: PointerTrace::new(config, samples, &session.ledger),
        record: result.record,
        ledger: session.ledger,
        frame: result.frame,
        bps_series,
    })
}

/// Runs a session from recorded pointer samples. Ticks without a sample get
/// a released button.
pub fn replay_samples(config: &SessionConfig, samples: &[PointerSample]) -> Result<HeadlessRun, ConfigError> {
    replay_with_pauses(config, samples, &[])
}

/// Like [`replay_samples`], also entering and leaving a pause before each
/// tick listed in `pauses`.
pub fn replay_with_pauses(
    config: &SessionConfig,
    samples: &[PointerSample],
    pauses: &[u64],
) -> Result<HeadlessRun, ConfigError> {
    let mut session = Session::new(config.clone())?;
    let mut bps_series = Vec::new();
    let mut used = Vec::new();
    let mut next = samples.iter().peekable();
    let mut pending_pauses = pauses.iter().peekable();
    while !session.is_finished() {
        let tick = session.elapsed_ticks;
        while pending_pauses.next_if(|&&p| p <= tick).is_some() {
            session.toggle_pause();
            session.toggle_pause();
        }
        while next.peek().is_some_and(|s| s.tick < tick) {
            next.next();
        }
        let sample = match next.peek() {
            Some(s) if s.tick == tick => *next.next().expect("peeked"),
            _ => PointerSample::released(tick),
        };
        used.push(sample);
        if let Some(report) = session.run_tick(sample) {
            bps_series.push(report.bps);
        }
    }
    // Pauses entered after the last tick.
    for _ in pending_pauses {
        session.toggle_pause();
        session.toggle_pause();
    }
    let result = session.finalize(false).expect("session ran to completion");
    Ok(HeadlessRun {
        trace: PointerTrace::new(config.clone(), used, &session.ledger).with_pauses(session.pause_ticks.clone()),
        record: result.record,
        ledger: session.ledger,
        frame: result.frame,
        bps_series,
    })
}

/// Outcome of re-running a recorded trace against its original log.
#[derive(Clone, Debug, PartialEq)]
pub enum ReplayVerdict {
    Identical,
    Diverged {
        /// First tick whose events differ from the ones recorded in the
        /// trace, when that can be located.
        first_divergent_tick: Option<u64>,
        regenerated_log: String,
    },
}

/// Re-executes `trace` and compares the regenerated log text byte for byte
/// with `original_log`.
pub fn verify_replay(trace: &PointerTrace, original_log: &str) -> Result<ReplayVerdict, ConfigError> {
    let run = replay_with_pauses(&trace.config, &trace.samples, &trace.pauses)?;
    let regenerated_log = write_log(&run.record).expect("session records are consistent");
    if regenerated_log == original_log {
        return Ok(ReplayVerdict::Identical);
    }
    let first_divergent_tick = first_divergence(&trace.events, &run.trace.events);
    Ok(ReplayVerdict::Diverged { first_divergent_tick, regenerated_log })
}
