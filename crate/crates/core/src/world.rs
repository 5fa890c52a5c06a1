//! Random-walking boxes and the complexity staircase.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{SessionConfig, HERO_INDEX};
use crate::error::ConfigError;
use crate::tracker::Command;

/// Seeded generator used for every engine draw. ChaCha8 output is fixed by
/// the seed on every platform.
pub type EngineRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> EngineRng {
    EngineRng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PixelPoint {
    pub x: i64,
    pub y: i64,
}

impl PixelPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

/// A box covering the half-open pixel rectangle
/// `[x - half_width, x + half_width) x [y - half_height, y + half_height)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxEntity {
    pub id: u32,
    pub center: PixelPoint,
    pub half_width: u32,
    pub half_height: u32,
    pub color_index: u8,
    pub is_hero: bool,
}

impl BoxEntity {
    pub fn left(&self) -> i64 {
        self.center.x - i64::from(self.half_width)
    }

    pub fn right(&self) -> i64 {
        self.center.x + i64::from(self.half_width)
    }

    pub fn top(&self) -> i64 {
        self.center.y - i64::from(self.half_height)
    }

    pub fn bottom(&self) -> i64 {
        self.center.y + i64::from(self.half_height)
    }

    pub fn inside(&self, width: u32, height: u32) -> bool {
        self.left() >= 0
            && self.top() >= 0
            && self.right() <= i64::from(width)
            && self.bottom() <= i64::from(height)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorldState {
    pub tick: u64,
    /// Paint order. The hero is spawned first and never removed.
    pub boxes: Vec<BoxEntity>,
    pub hero_id: u32,
    pub speed: f64,
    pub width: u32,
    pub height: u32,
    next_id: u32,
}

impl WorldState {
    pub fn hero(&self) -> &BoxEntity {
        self.boxes
            .iter()
            .find(|b| b.id == self.hero_id)
            .expect("hero box is never removed")
    }

    pub fn noc(&self) -> usize {
        self.boxes.len()
    }

    /// Checks the structural invariants: one hero, every box inside bounds.
    pub fn is_consistent(&self) -> bool {
        let heroes = self.boxes.iter().filter(|b| b.is_hero).count();
        heroes == 1
            && self.hero().is_hero
            && self.boxes.iter().all(|b| b.inside(self.width, self.height))
    }
}

/// Folds `v` back into `[lo, hi]` as if bouncing off both walls.
pub(crate) fn reflect(v: i64, lo: i64, hi: i64) -> i64 {
    if hi <= lo {
        return lo;
    }
    let span = hi - lo;
    let m = (v - lo).rem_euclid(2 * span);
    lo + if m > span { 2 * span - m } else { m }
}

fn random_box(id: u32, config: &SessionConfig, rng: &mut EngineRng) -> BoxEntity {
    let half_width = rng.random_range(config.box_half_min..=config.box_half_max);
    let half_height = rng.random_range(config.box_half_min..=config.box_half_max);
    let x = rng.random_range(i64::from(half_width)..=i64::from(config.width - half_width));
    let y = rng.random_range(i64::from(half_height)..=i64::from(config.height - half_height));
    let color_index = rng.random_range(HERO_INDEX + 1..config.palette.len() as u8);
    BoxEntity {
        id,
        center: PixelPoint::new(x, y),
        half_width,
        half_height,
        color_index,
        is_hero: false,
    }
}

/// Builds the starting world: the hero at the center of the arena followed by
/// `initial_noc - 1` randomly placed boxes.
pub fn spawn_world(config: &SessionConfig, rng: &mut EngineRng) -> Result<WorldState, ConfigError> {
    config.validate()?;
    let hero = BoxEntity {
        id: 0,
        center: PixelPoint::new(i64::from(config.width / 2), i64::from(config.height / 2)),
        half_width: config.hero_half_width,
        half_height: config.hero_half_height,
        color_index: HERO_INDEX,
        is_hero: true,
    };
    let mut boxes = Vec::with_capacity(config.noc_max);
    boxes.push(hero);
    for id in 1..config.initial_noc as u32 {
        boxes.push(random_box(id, config, rng));
    }
    Ok(WorldState {
        tick: 0,
        boxes,
        hero_id: 0,
        speed: config.initial_speed,
        width: config.width,
        height: config.height,
        next_id: config.initial_noc as u32,
    })
}

/// One random-walk step for every box, in paint order. Each axis moves by an
/// integer drawn uniformly from `[-round(speed), round(speed)]`; no draws are
/// made when that bound is zero. Boxes bounce off the arena walls.
pub fn step_world(world: &mut WorldState, rng: &mut EngineRng) {
    let reach = world.speed.round() as i64;
    if reach > 0 {
        let (width, height) = (i64::from(world.width), i64::from(world.height));
        for b in &mut world.boxes {
            let dx = rng.random_range(-reach..=reach);
            let dy = rng.random_range(-reach..=reach);
            let (hw, hh) = (i64::from(b.half_width), i64::from(b.half_height));
            b.center.x = reflect(b.center.x + dx, hw, width - hw);
            b.center.y = reflect(b.center.y + dy, hh, height - hh);
        }
    }
    world.tick += 1;
}

/// Squared Euclidean distance in exact integer arithmetic.
pub fn hero_distance_sq(pointer: PixelPoint, hero_center: PixelPoint) -> i64 {
    let dx = pointer.x - hero_center.x;
    let dy = pointer.y - hero_center.y;
    dx * dx + dy * dy
}

/// Moves the staircase one step. `Inc` appends boxes and speeds up, `Dec`
/// pops the most recently added non-hero boxes and slows down; both stay
/// inside the configured box-count and speed limits.
pub fn apply_complexity(
    world: &mut WorldState,
    command: Command,
    config: &SessionConfig,
    rng: &mut EngineRng,
) {
    match command {
        Command::None => {}
        Command::Inc => {
            for _ in 0..config.inc_boxes {
                if world.boxes.len() >= config.noc_max {
                    break;
                }
                let id = world.next_id;
                world.next_id += 1;
                world.boxes.push(random_box(id, config, rng));
            }
            world.speed = (world.speed * config.speed_factor_up).clamp(config.speed_min, config.speed_max);
        }
        Command::Dec => {
            for _ in 0..config.dec_boxes {
                if world.boxes.len() <= config.noc_min {
                    break;
                }
                match world.boxes.iter().rposition(|b| !b.is_hero) {
                    Some(i) => {
                        world.boxes.remove(i);
                    }
                    None => break,
                }
            }
            world.speed =
                (world.speed * config.speed_factor_down).clamp(config.speed_min, config.speed_max);
        }
    }
}
