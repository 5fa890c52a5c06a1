//! The lost/found state machine run once per tick.
//!
//! A run of more than `run_length` consecutive far ticks is a losing event
//! (complexity goes down), a run of more than `run_length` consecutive near
//! ticks is a finding event (complexity goes up). Transition values are only
//! recorded once the first loss of the session has happened, so the first
//! recorded transition is always a lost-to-found one.

use crate::config::SessionConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrackState {
    Found,
    Lost,
}

impl TrackState {
    pub fn as_str(self) -> &'static str {
        match self {
            TrackState::Found => "Found",
            TrackState::Lost => "Lost",
        }
    }
}

/// Staircase command emitted by a tracker step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    None,
    Inc,
    Dec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackerState {
    pub state: TrackState,
    pub nof_lost: u32,
    pub nof_found: u32,
    pub first_lost: bool,
    pub dist_threshold_sq: i64,
    pub run_length: u32,
}

impl TrackerState {
    /// Sessions start found with the recording gate closed.
    pub fn new(dist_threshold_sq: i64, run_length: u32) -> Self {
        Self {
            state: TrackState::Found,
            nof_lost: 0,
            nof_found: 0,
            first_lost: false,
            dist_threshold_sq,
            run_length,
        }
    }

    pub fn from_config(config: &SessionConfig) -> Self {
        Self::new(config.dist_threshold_sq, config.run_length)
    }

    /// Feeds one tick. `bps` is the complexity measured on this tick and is
    /// what gets recorded if an event fires; `tick` goes to the timestamp
    /// columns of the ledger.
    pub fn step(&mut self, dist_sq: i64, bps: u64, ledger: &mut EventLedger, tick: u64) -> Command {
        if dist_sq > self.dist_threshold_sq {
            self.nof_lost += 1;
            self.nof_found = 0;
            if self.nof_lost > self.run_length {
                if self.state == TrackState::Found && self.first_lost {
                    ledger.found2lost.push(bps);
                    ledger.event_ticks_found2lost.push(tick);
                }
                self.first_lost = true;
                self.state = TrackState::Lost;
                self.nof_lost = 0;
                ledger.lost.push(bps);
                ledger.event_ticks_lost.push(tick);
                return Command::Dec;
            }
        } else {
            self.nof_found += 1;
            self.nof_lost = 0;
            if self.nof_found > self.run_length {
                if self.state == TrackState::Lost && self.first_lost {
                    ledger.lost2found.push(bps);
                    ledger.event_ticks_lost2found.push(tick);
                }
                self.state = TrackState::Found;
                self.nof_found = 0;
                ledger.found.push(bps);
                ledger.event_ticks_found.push(tick);
                return Command::Inc;
            }
        }
        Command::None
    }
}

/// Complexity values recorded at events, plus the tick each was recorded at.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventLedger {
    pub lost: Vec<u64>,
    pub found: Vec<u64>,
    pub lost2found: Vec<u64>,
    pub found2lost: Vec<u64>,
    pub event_ticks_lost: Vec<u64>,
    pub event_ticks_found: Vec<u64>,
    pub event_ticks_lost2found: Vec<u64>,
    pub event_ticks_found2lost: Vec<u64>,
}

/// True if `needle` can be obtained from `haystack` by deleting elements.
pub fn is_subsequence(needle: &[u64], haystack: &[u64]) -> bool {
    let mut rest = haystack.iter();
    needle.iter().all(|n| rest.any(|h| h == n))
}

impl EventLedger {
    /// Transition ticks merged in time order, tagged `true` for lost-to-found.
    pub fn transitions(&self) -> Vec<(u64, bool)> {
        let mut all: Vec<(u64, bool)> = self
            .event_ticks_lost2found
            .iter()
            .map(|&t| (t, true))
            .chain(self.event_ticks_found2lost.iter().map(|&t| (t, false)))
            .collect();
        all.sort_unstable();
        all
    }

    /// Alternation, length bound and subsequence invariants.
    pub fn check_invariants(&self) -> Result<(), String> {
        let (l2f, f2l) = (self.lost2found.len(), self.found2lost.len());
        if !(f2l <= l2f && l2f <= f2l + 1) {
            return Err(format!("length bound violated: {l2f} lost2found, {f2l} found2lost"));
        }
        if !is_subsequence(&self.found2lost, &self.lost) {
            return Err("found2lost is not a subsequence of lost".into());
        }
        if !is_subsequence(&self.lost2found, &self.found) {
            return Err("lost2found is not a subsequence of found".into());
        }
        for (i, (_, is_l2f)) in self.transitions().iter().enumerate() {
            if *is_l2f != (i % 2 == 0) {
                return Err(format!("transition {i} breaks the F, L, F, ... alternation"));
            }
        }
        if let (Some(first_f2l), Some(first_dec)) =
            (self.event_ticks_found2lost.first(), self.event_ticks_lost.first())
        {
            if first_f2l <= first_dec {
                return Err("found2lost recorded before the first losing event".into());
            }
        }
        Ok(())
    }
}
