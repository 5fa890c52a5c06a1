//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

const FOUND: i32 = 0;
const LOST: i32 = 1;

/// Line-by-line transcription of the original per-tick update routine, with
/// `decComp`/`incComp` recording into `lost`/`found` and the command log.
#[derive(Debug, Default)]
pub struct OriginalUpdate {
    state: i32,
    nof_lost: i32,
    nof_found: i32,
    first_lost: bool,
    pub lost: Vec<u64>,
    pub found: Vec<u64>,
    pub lost2found: Vec<u64>,
    pub found2lost: Vec<u64>,
    /// -1 decComp, +1 incComp, 0 nothing.
    pub commands: Vec<i8>,
}

impl OriginalUpdate {
    pub fn new() -> Self {
        Self { state: FOUND, ..Default::default() }
    }

    fn dec_comp(&mut self, bps: u64) {
        self.lost.push(bps);
        self.commands.push(-1);
    }

    fn inc_comp(&mut self, bps: u64) {
        self.found.push(bps);
        self.commands.push(1);
    }

    #[allow(clippy::too_many_arguments)]
    pub fn update(&mut self, mouse_x: i64, mouse_y: i64, x: i64, y: i64, bps: u64) {
        let dist = (mouse_x - x) * (mouse_x - x) + (mouse_y - y) * (mouse_y - y);

        if dist > 121 {
            self.nof_lost += 1;
            self.nof_found = 0;
            if self.nof_lost > 12 {
                if self.state == FOUND && self.first_lost {
                    self.found2lost.push(bps);
                }
                self.first_lost = true;
                self.state = LOST;
                self.nof_lost = 0;
                self.dec_comp(bps);
                return;
            }
        } else {
            self.nof_found += 1;
            self.nof_lost = 0;
            if self.nof_found > 12 {
                if self.state == LOST && self.first_lost {
                    self.lost2found.push(bps);
                }
                self.state = FOUND;
                self.nof_found = 0;
                self.inc_comp(bps);
                return;
            }
        }
        self.commands.push(0);
    }
}

/// Standard deviation with an explicit denominator, from exact integer sums.
pub fn std_dev_with(seq: &[u64], sample: bool) -> f64 {
    let n = seq.len() as i128;
    let sum: i128 = seq.iter().map(|&v| v as i128).sum();
    let sum_sq: i128 = seq.iter().map(|&v| (v as i128) * (v as i128)).sum();
    // n * sum((x - mean)^2) = n * sum(x^2) - sum(x)^2, exactly.
    let scaled = (n * sum_sq - sum * sum) as f64;
    let denom = if sample { n * (n - 1) } else { n * n } as f64;
    (scaled / denom).sqrt()
}

/// Pixel-by-pixel difference count through the accessor API.
pub fn count_differences(a: &brainb_core::Bitmap, b: &brainb_core::Bitmap) -> u64 {
    assert_eq!((a.width, a.height), (b.width, b.height));
    let mut k = 0;
    for y in 0..a.height {
        for x in 0..a.width {
            if a.get(x, y) != b.get(x, y) {
                k += 1;
            }
        }
    }
    k
}

/// Reference random walker: uniform integer step per axis in
/// `[-round(speed), round(speed)]`, mirrored at the walls until inside.
pub fn reference_walk(
    centers: &mut [(i64, i64)],
    halves: &[(i64, i64)],
    bounds: (i64, i64),
    speed: f64,
    rng: &mut ChaCha8Rng,
) {
    let r = speed.round() as i64;
    if r == 0 {
        return;
    }
    for (c, h) in centers.iter_mut().zip(halves) {
        let dx = rng.random_range(-r..=r);
        let dy = rng.random_range(-r..=r);
        c.0 = bounce(c.0 + dx, h.0, bounds.0 - h.0);
        c.1 = bounce(c.1 + dy, h.1, bounds.1 - h.1);
    }
}

fn bounce(mut v: i64, lo: i64, hi: i64) -> i64 {
    loop {
        if v < lo {
            v = 2 * lo - v;
        } else if v > hi {
            v = 2 * hi - v;
        } else {
            return v;
        }
    }
}
