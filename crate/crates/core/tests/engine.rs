mod common;

use brainb_core::meter::{changed_pixels, crop_window, rasterize, rasterize_window};
use brainb_core::usersim::run_headless;
use brainb_core::world::{apply_complexity, seeded_rng, spawn_world, step_world};
use brainb_core::{
    Command, EventLedger, PointerModel, PointerSample, Session, SessionConfig, TrackerState,
};
use proptest::prelude::*;

use common::oracles::reference_walk;

#[test]
fn ten_thousand_spawns_stay_inside_bounds() {
    let configs = [
        SessionConfig::default(),
        SessionConfig { width: 80, height: 72, initial_noc: 40, ..Default::default() },
    ];
    for config in &configs {
        for seed in 0..5_000 {
            let world = spawn_world(config, &mut seeded_rng(seed)).unwrap();
            assert_eq!(world.noc(), config.initial_noc);
            assert!(world.is_consistent(), "seed {seed}");
        }
    }
}

#[test]
fn walk_matches_reference_walker() {
    let config = SessionConfig { initial_noc: 30, ..Default::default() };
    for (seed, speed) in [(1u64, 3.0), (2, 17.4), (3, 40.0), (4, 0.4)] {
        let mut world = spawn_world(&config, &mut seeded_rng(seed)).unwrap();
        world.speed = speed;
        let mut centers: Vec<(i64, i64)> = world.boxes.iter().map(|b| (b.center.x, b.center.y)).collect();
        let halves: Vec<(i64, i64)> = world
            .boxes
            .iter()
            .map(|b| (i64::from(b.half_width), i64::from(b.half_height)))
            .collect();
        let mut engine_rng = seeded_rng(seed + 100);
        let mut oracle_rng = seeded_rng(seed + 100);
        for step in 0..1000 {
            step_world(&mut world, &mut engine_rng);
            reference_walk(&mut centers, &halves, (1024, 768), speed, &mut oracle_rng);
            let got: Vec<(i64, i64)> = world.boxes.iter().map(|b| (b.center.x, b.center.y)).collect();
            assert_eq!(got, centers, "seed {seed} step {step}");
            assert_eq!(world.tick, step + 1);
        }
    }
}

#[test]
fn alternating_commands_keep_speed_and_count_in_range() {
    let config = SessionConfig { noc_min: 3, noc_max: 25, initial_noc: 10, ..Default::default() };
    let mut rng = seeded_rng(6);
    let mut world = spawn_world(&config, &mut rng).unwrap();
    let mut cmd_rng = seeded_rng(7);
    for i in 0..500 {
        let command = match (i / 37) % 3 {
            0 => Command::Inc,
            1 => Command::Dec,
            _ => {
                if rand::Rng::random_bool(&mut cmd_rng, 0.5) {
                    Command::Inc
                } else {
                    Command::Dec
                }
            }
        };
        apply_complexity(&mut world, command, &config, &mut rng);
        step_world(&mut world, &mut rng);
        assert!((config.speed_min..=config.speed_max).contains(&world.speed));
        assert!((config.noc_min..=config.noc_max).contains(&world.noc()));
        assert!(world.is_consistent());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tracker_counters_are_exclusive(stream in prop::collection::vec((any::<bool>(), 0u64..100_000), 0..400)) {
        let mut tracker = TrackerState::new(121, 12);
        let mut ledger = EventLedger::default();
        let mut last_dec: Option<u64> = None;
        for (tick, (far, bps)) in stream.into_iter().enumerate() {
            let tick = tick as u64;
            let command = tracker.step(if far { 122 } else { 121 }, bps, &mut ledger, tick);
            prop_assert!(tracker.nof_lost == 0 || tracker.nof_found == 0);
            prop_assert!(tracker.nof_lost <= 12 && tracker.nof_found <= 12);
            if command == Command::Dec {
                if let Some(prev) = last_dec {
                    prop_assert!(tick - prev >= 13);
                }
                last_dec = Some(tick);
            }
        }
        prop_assert!(ledger.check_invariants().is_ok());
    }

    #[test]
    fn changed_count_is_symmetric(a in prop::collection::vec(0u8..4, 64), b in prop::collection::vec(0u8..4, 64)) {
        let to_bitmap = |pixels: Vec<u8>| brainb_core::Bitmap { width: 8, height: 8, pixels };
        let (a, b) = (to_bitmap(a), to_bitmap(b));
        prop_assert_eq!(changed_pixels(&a, &b), changed_pixels(&b, &a));
        prop_assert!(changed_pixels(&a, &b) <= 64);
    }

    #[test]
    fn window_raster_equals_crop(seed in 0u64..10_000, cx in -400i64..1400, cy in -400i64..1200, w in 1u32..400, h in 1u32..400) {
        let config = SessionConfig { initial_noc: 50, ..Default::default() };
        let world = spawn_world(&config, &mut seeded_rng(seed)).unwrap();
        let center = brainb_core::PixelPoint::new(cx, cy);
        prop_assert_eq!(rasterize_window(&world, center, w, h), crop_window(&rasterize(&world), center, w, h));
    }
}

#[test]
fn perfect_tracker_full_session() {
    let config = SessionConfig::default();
    let run = run_headless(&config, &PointerModel::perfect(), 2).unwrap();
    assert!(run.record.lost.is_empty());
    assert!(run.record.found2lost.is_empty());
    let inc_firings = (config.duration_ticks / u64::from(config.run_length + 1)) as usize;
    assert_eq!(run.record.found.len(), inc_firings);
    assert_eq!(run.record.noc as usize, config.noc_max.min(config.initial_noc + inc_firings));
    let max_bps = u64::from(config.window_w * config.window_h) * 10;
    assert!(run.bps_series.iter().all(|&b| b <= max_bps));
}

#[test]
fn absent_pointer_loses_once_and_never_finds() {
    let config = SessionConfig { duration_ticks: 1300, ..Default::default() };
    let run = run_headless(&config, &PointerModel::absent(), 5).unwrap();
    let ledger = &run.ledger;
    assert!(ledger.lost2found.is_empty());
    assert!(ledger.found2lost.is_empty());
    assert!(ledger.found.is_empty());
    assert_eq!(ledger.lost.len(), 100);
    assert_eq!(ledger.event_ticks_lost[0], 12);
    assert_eq!(run.record.noc as usize, config.noc_min);
}

#[test]
fn pause_pairs_only_change_nop() {
    let config = SessionConfig { duration_ticks: 800, ..Default::default() };
    let run = run_headless(&config, &PointerModel::lagged_noisy(2, 5.0), 12).unwrap();

    let mut session = Session::new(run.trace.config.clone()).unwrap();
    for (i, sample) in run.trace.samples.iter().enumerate() {
        if i % 50 == 7 {
            session.toggle_pause();
            assert_eq!(session.run_tick(*sample), None);
            session.toggle_pause();
        }
        session.run_tick(*sample).unwrap();
    }
    let record = session.finalize(false).unwrap().record;
    assert_eq!(session.ledger, run.ledger);
    assert_eq!(record.nop, 16);
    assert_eq!(brainb_core::LogRecord { nop: 0, ..record }, run.record);
}

#[test]
fn replaying_samples_reproduces_the_ledger() {
    let config = SessionConfig { duration_ticks: 1500, ..Default::default() };
    let run = run_headless(&config, &PointerModel::capacity(40_000), 9).unwrap();
    let mut session = Session::new(run.trace.config.clone()).unwrap();
    for sample in &run.trace.samples {
        session.run_tick(*sample);
    }
    assert_eq!(session.ledger, run.ledger);
    assert_eq!(session.finalize(false).unwrap().frame, run.frame);
}

#[test]
fn hero_exists_every_tick() {
    let config = SessionConfig { noc_min: 1, initial_noc: 3, duration_ticks: 2000, ..Default::default() };
    let mut session = Session::new(config).unwrap();
    while !session.is_finished() {
        session.run_tick(PointerSample::released(session.elapsed_ticks));
        assert!(session.world.is_consistent());
    }
}
