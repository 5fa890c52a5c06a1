//! One benchmark session driven tick by tick.

use crate::config::SessionConfig;
use crate::error::{ConfigError, SessionError};
use crate::logkit::{LogRecord, RecordInputs};
use crate::meter::{rasterize, rasterize_window, Bitmap, ComplexityMeter};
use crate::tracker::{Command, EventLedger, TrackState, TrackerState};
use crate::world::{
    apply_complexity, hero_distance_sq, seeded_rng, spawn_world, step_world, EngineRng,
    PixelPoint, WorldState,
};

/// Pointer position and button state for one tick.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointerSample {
    pub x: i64,
    pub y: i64,
    pub button_down: bool,
    pub tick: u64,
}

impl PointerSample {
    /// Released button in the top-left corner; what a silent client sends.
    pub fn released(tick: u64) -> Self {
        Self { x: 0, y: 0, button_down: false, tick }
    }

    pub fn point(&self) -> PixelPoint {
        PixelPoint::new(self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotBox {
    pub id: u32,
    pub x: i64,
    pub y: i64,
    pub half_width: u32,
    pub half_height: u32,
    pub color_index: u8,
    pub is_hero: bool,
}

/// Immutable copy of what is on screen at one tick.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSnapshot {
    pub tick: u64,
    pub boxes: Vec<SnapshotBox>,
    pub hero: PixelPoint,
    pub bps: u64,
    pub noc: usize,
    pub state: TrackState,
    /// Elapsed time as `m:ss`.
    pub clock: String,
    pub paused: bool,
    pub width: u32,
    pub height: u32,
}

/// What happened during one executed tick.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TickReport {
    pub tick: u64,
    pub bps: u64,
    pub dist_sq: i64,
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionResult {
    pub record: LogRecord,
    pub frame: Bitmap,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub config: SessionConfig,
    pub world: WorldState,
    pub tracker: TrackerState,
    pub ledger: EventLedger,
    pub meter: ComplexityMeter,
    pub nop: u64,
    /// `elapsed_ticks` at each pause entry.
    pub pause_ticks: Vec<u64>,
    pub paused: bool,
    pub elapsed_ticks: u64,
    rng: EngineRng,
}

impl Session {
    /// Spawns the world from `config.rng_seed`.
    pub fn new(config: SessionConfig) -> Result<Self, ConfigError> {
        let mut rng = seeded_rng(config.rng_seed);
        let world = spawn_world(&config, &mut rng)?;
        Ok(Self {
            tracker: TrackerState::from_config(&config),
            ledger: EventLedger::default(),
            meter: ComplexityMeter::from_config(&config),
            nop: 0,
            pause_ticks: Vec::new(),
            paused: false,
            elapsed_ticks: 0,
            world,
            rng,
            config,
        })
    }

    pub fn is_finished(&self) -> bool {
        self.elapsed_ticks >= self.config.duration_ticks
    }

    /// Advances one tick: world step, measurement around the hero, tracker
    /// update, staircase. A released button counts as far from the hero.
    /// Returns `None` (and changes nothing) while paused or after the end.
    pub fn run_tick(&mut self, pointer: PointerSample) -> Option<TickReport> {
        if self.paused || self.is_finished() {
            return None;
        }
        let tick = self.elapsed_ticks;
        step_world(&mut self.world, &mut self.rng);

        let hero = self.world.hero().center;
        let crop = rasterize_window(&self.world, hero, self.config.window_w, self.config.window_h);
        let bps = self
            .meter
            .measure(crop, &self.config)
            .expect("crop is cut at the meter's window size");

        let pointer = self.clamp(pointer);
        let dist_sq = if pointer.button_down {
            hero_distance_sq(pointer.point(), hero)
        } else {
            i64::MAX
        };
        let command = self.tracker.step(dist_sq, bps, &mut self.ledger, tick);
        apply_complexity(&mut self.world, command, &self.config, &mut self.rng);
        self.elapsed_ticks += 1;
        Some(TickReport { tick, bps, dist_sq, command })
    }

    fn clamp(&self, mut pointer: PointerSample) -> PointerSample {
        pointer.x = pointer.x.clamp(0, i64::from(self.config.width) - 1);
        pointer.y = pointer.y.clamp(0, i64::from(self.config.height) - 1);
        pointer
    }

    /// Flips pause; only entering a pause counts toward `nop`.
    pub fn toggle_pause(&mut self) {
        self.paused = !self.paused;
        if self.paused {
            self.nop += 1;
            self.pause_ticks.push(self.elapsed_ticks);
        }
    }

    pub fn snapshot(&self) -> StateSnapshot {
        Self::snapshot_of(&self.world, self, self.meter.bps)
    }

    /// The frame the next tick will judge the pointer against: the world
    /// after its next random-walk step, with the last measured bps. Scripted
    /// pointer models see this so that a perfect tracker is exactly on the
    /// hero.
    pub fn lookahead(&self) -> StateSnapshot {
        if self.paused || self.is_finished() {
            return self.snapshot();
        }
        let mut world = self.world.clone();
        step_world(&mut world, &mut self.rng.clone());
        Self::snapshot_of(&world, self, self.meter.bps)
    }

    fn snapshot_of(world: &WorldState, session: &Session, bps: u64) -> StateSnapshot {
        let secs = session.elapsed_ticks * u64::from(session.config.tick_ms) / 1000;
        StateSnapshot {
            tick: session.elapsed_ticks,
            boxes: world
                .boxes
                .iter()
                .map(|b| SnapshotBox {
                    id: b.id,
                    x: b.center.x,
                    y: b.center.y,
                    half_width: b.half_width,
                    half_height: b.half_height,
                    color_index: b.color_index,
                    is_hero: b.is_hero,
                })
                .collect(),
            hero: world.hero().center,
            bps,
            noc: world.noc(),
            state: session.tracker.state,
            clock: format!("{}:{:02}", secs / 60, secs % 60),
            paused: session.paused,
            width: world.width,
            height: world.height,
        }
    }

    /// The full synthetic frame of the current world.
    pub fn frame(&self) -> Bitmap {
        rasterize(&self.world)
    }

    /// Builds the log record and final frame. Before the configured duration
    /// this needs `force` (the save key), and the record carries the time
    /// actually elapsed.
    pub fn finalize(&self, force: bool) -> Result<SessionResult, SessionError> {
        if !force && !self.is_finished() {
            return Err(SessionError::NotFinished {
                elapsed: self.elapsed_ticks,
                duration: self.config.duration_ticks,
            });
        }
        let record = LogRecord::new(RecordInputs {
            time_ticks: self.elapsed_ticks,
            tick_ms: self.config.tick_ms,
            bps_final: self.meter.bps,
            noc: self.world.noc() as u64,
            nop: self.nop,
            lost: self.ledger.lost.clone(),
            found: self.ledger.found.clone(),
            lost2found: self.ledger.lost2found.clone(),
            found2lost: self.ledger.found2lost.clone(),
        });
        Ok(SessionResult { record, frame: self.frame() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(duration_ticks: u64) -> SessionConfig {
        SessionConfig { duration_ticks, rng_seed: 11, ..Default::default() }
    }

    fn on_hero(session: &Session) -> PointerSample {
        let hero = session.lookahead().hero;
        PointerSample { x: hero.x, y: hero.y, button_down: true, tick: session.elapsed_ticks }
    }

    #[test]
    fn paused_session_is_frozen() {
        let mut session = Session::new(short(100)).unwrap();
        session.run_tick(on_hero(&session));
        session.toggle_pause();
        let before = (session.world.clone(), session.ledger.clone(), session.tracker.clone());
        for _ in 0..20 {
            assert_eq!(session.run_tick(PointerSample::released(0)), None);
        }
        assert_eq!((session.world.clone(), session.ledger.clone(), session.tracker.clone()), before);
        assert_eq!(session.elapsed_ticks, 1);
    }

    #[test]
    fn pause_counting() {
        let mut session = Session::new(short(10)).unwrap();
        assert_eq!(session.nop, 0);
        session.toggle_pause();
        session.toggle_pause();
        assert_eq!(session.nop, 1);
        for _ in 0..2 {
            session.toggle_pause();
            session.toggle_pause();
        }
        assert_eq!(session.nop, 3);
        assert!(!session.paused);
    }

    #[test]
    fn released_button_loses_the_hero() {
        let mut session = Session::new(short(100)).unwrap();
        let mut commands = Vec::new();
        for _ in 0..13 {
            let mut sample = on_hero(&session);
            sample.button_down = false;
            commands.push(session.run_tick(sample).unwrap().command);
        }
        assert_eq!(commands[12], Command::Dec);
        assert!(commands[..12].iter().all(|c| *c == Command::None));
        assert_eq!(session.tracker.state, TrackState::Lost);
    }

    #[test]
    fn snapshots() {
        let mut session = Session::new(short(100)).unwrap();
        let first = session.snapshot();
        assert_eq!(first.tick, 0);
        assert_eq!(first.noc, session.config.initial_noc);
        assert_eq!(first.clock, "0:00");
        assert_eq!(session.snapshot(), first);
        for _ in 0..7 {
            session.run_tick(on_hero(&session));
        }
        assert_eq!(session.snapshot().tick, 7);
    }

    #[test]
    fn lookahead_matches_next_world() {
        let mut session = Session::new(short(100)).unwrap();
        let peek = session.lookahead();
        session.run_tick(on_hero(&session));
        assert_eq!(session.world.hero().center, peek.hero);
    }

    #[test]
    fn recorded_bps_is_the_same_tick_measurement() {
        let mut session = Session::new(short(400)).unwrap();
        let mut reports = Vec::new();
        for t in 0..400 {
            let sample = if (t / 40) % 2 == 0 { on_hero(&session) } else { PointerSample::released(t) };
            reports.push(session.run_tick(sample).unwrap());
        }
        let ledger = &session.ledger;
        assert!(!ledger.lost2found.is_empty() && !ledger.found2lost.is_empty());
        for (ticks, values) in [
            (&ledger.event_ticks_lost, &ledger.lost),
            (&ledger.event_ticks_found, &ledger.found),
            (&ledger.event_ticks_lost2found, &ledger.lost2found),
            (&ledger.event_ticks_found2lost, &ledger.found2lost),
        ] {
            for (t, v) in ticks.iter().zip(values) {
                assert_eq!(reports[*t as usize].bps, *v);
            }
        }
        ledger.check_invariants().unwrap();
    }

    #[test]
    fn finalize_rules() {
        let mut session = Session::new(short(1200)).unwrap();
        assert!(matches!(session.finalize(false), Err(SessionError::NotFinished { .. })));
        for _ in 0..1200 {
            session.run_tick(on_hero(&session));
        }
        assert!(session.is_finished());
        assert_eq!(session.run_tick(on_hero(&session)), None);
        let result = session.finalize(false).unwrap();
        assert_eq!(result.record.time_ticks, 1200);
        assert_eq!(result.record.time_string, "2:0");
        assert!(result.record.lost.is_empty());
        assert_eq!(result.record.kilobytes, 0.0);
        assert_eq!(result.frame.width, session.config.width);
    }

    #[test]
    fn forced_save_mid_run() {
        let mut session = Session::new(SessionConfig::default()).unwrap();
        for _ in 0..1200 {
            session.run_tick(PointerSample::released(0));
        }
        let result = session.finalize(true).unwrap();
        assert_eq!(result.record.time_string, "2:0");
        assert_eq!(result.record.time_ticks, 1200);
    }

    #[test]
    fn still_world_measures_zero_after_first_tick() {
        let config = SessionConfig {
            initial_speed: 0.0,
            speed_min: 0.0,
            speed_max: 0.0,
            duration_ticks: 12,
            ..Default::default()
        };
        let mut session = Session::new(config).unwrap();
        let first = session.run_tick(on_hero(&session)).unwrap();
        assert!(first.bps > 0);
        for _ in 1..12 {
            assert_eq!(session.run_tick(on_hero(&session)).unwrap().bps, 0);
        }
    }
}
