//! Synthetic frames and the changed-pixel complexity meter.
//!
//! The meter watches a fixed-size window centred on the hero and reports how
//! many of its pixels changed since the previous tick, scaled to bits per
//! second.

use crate::config::{SessionConfig, BACKGROUND_INDEX};
use crate::error::MeterError;
use crate::world::{PixelPoint, WorldState};

/// Row-major palette-index image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl Bitmap {
    pub fn filled(width: u32, height: u32, index: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![index; width as usize * height as usize],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, index: u8) {
        self.pixels[y as usize * self.width as usize + x as usize] = index;
    }

    pub fn count_not(&self, index: u8) -> usize {
        self.pixels.iter().filter(|&&p| p != index).count()
    }
}

/// Paints the world into `frame`, reusing its allocation.
pub fn rasterize_into(world: &WorldState, frame: &mut Bitmap) {
    frame.width = world.width;
    frame.height = world.height;
    frame.pixels.clear();
    frame
        .pixels
        .resize(world.width as usize * world.height as usize, BACKGROUND_INDEX);
    let stride = world.width as usize;
    for b in &world.boxes {
        let x0 = b.left().max(0) as usize;
        let x1 = b.right().min(i64::from(world.width)).max(0) as usize;
        let y0 = b.top().max(0) as usize;
        let y1 = b.bottom().min(i64::from(world.height)).max(0) as usize;
        if x0 >= x1 {
            continue;
        }
        for y in y0..y1 {
            frame.pixels[y * stride + x0..y * stride + x1].fill(b.color_index);
        }
    }
}

/// Background then every box as a filled rectangle in list order, so later
/// boxes cover earlier ones.
pub fn rasterize(world: &WorldState) -> Bitmap {
    let mut frame = Bitmap::filled(0, 0, BACKGROUND_INDEX);
    rasterize_into(world, &mut frame);
    frame
}

/// Copies the `window_w` x `window_h` rectangle whose centre is `center`
/// (top-left at `center - size / 2`). Pixels outside the frame read as
/// background.
pub fn crop_window(frame: &Bitmap, center: PixelPoint, window_w: u32, window_h: u32) -> Bitmap {
    let mut crop = Bitmap::filled(window_w, window_h, BACKGROUND_INDEX);
    let left = center.x - i64::from(window_w / 2);
    let top = center.y - i64::from(window_h / 2);
    let src_x0 = left.max(0);
    let src_x1 = (left + i64::from(window_w)).min(i64::from(frame.width));
    if src_x0 >= src_x1 {
        return crop;
    }
    let span = (src_x1 - src_x0) as usize;
    let dst_x0 = (src_x0 - left) as usize;
    for row in 0..i64::from(window_h) {
        let y = top + row;
        if y < 0 || y >= i64::from(frame.height) {
            continue;
        }
        let src = y as usize * frame.width as usize + src_x0 as usize;
        let dst = row as usize * window_w as usize + dst_x0;
        crop.pixels[dst..dst + span].copy_from_slice(&frame.pixels[src..src + span]);
    }
    crop
}

/// Paints only the window that [`crop_window`] would cut out of the full
/// frame, with the same result.
pub fn rasterize_window(world: &WorldState, center: PixelPoint, window_w: u32, window_h: u32) -> Bitmap {
    let mut crop = Bitmap::filled(window_w, window_h, BACKGROUND_INDEX);
    let left = center.x - i64::from(window_w / 2);
    let top = center.y - i64::from(window_h / 2);
    // Visible part of the window, in world coordinates.
    let vx0 = left.max(0);
    let vx1 = (left + i64::from(window_w)).min(i64::from(world.width));
    let vy0 = top.max(0);
    let vy1 = (top + i64::from(window_h)).min(i64::from(world.height));
    let stride = window_w as usize;
    for b in &world.boxes {
        let x0 = b.left().max(vx0);
        let x1 = b.right().min(vx1);
        let y0 = b.top().max(vy0);
        let y1 = b.bottom().min(vy1);
        if x0 >= x1 || y0 >= y1 {
            continue;
        }
        let (cx0, cx1) = ((x0 - left) as usize, (x1 - left) as usize);
        for y in y0..y1 {
            let row = (y - top) as usize * stride;
            crop.pixels[row + cx0..row + cx1].fill(b.color_index);
        }
    }
    crop
}

/// Number of positions where two equally sized bitmaps differ.
pub fn changed_pixels(a: &Bitmap, b: &Bitmap) -> u64 {
    a.pixels.iter().zip(&b.pixels).filter(|(p, q)| p != q).count() as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityMeter {
    pub window_w: u32,
    pub window_h: u32,
    pub prev_crop: Option<Bitmap>,
    pub last_changed: u64,
    pub bps: u64,
}

impl ComplexityMeter {
    pub fn new(window_w: u32, window_h: u32) -> Self {
        Self {
            window_w,
            window_h,
            prev_crop: None,
            last_changed: 0,
            bps: 0,
        }
    }

    pub fn from_config(config: &SessionConfig) -> Self {
        Self::new(config.window_w, config.window_h)
    }

    /// Compares `crop` with the previous crop (all background on the first
    /// call) and returns `changed * ticks_per_second * bits_per_changed_pixel`.
    pub fn measure(&mut self, crop: Bitmap, config: &SessionConfig) -> Result<u64, MeterError> {
        if crop.width != self.window_w || crop.height != self.window_h {
            return Err(MeterError::DimensionMismatch {
                got_w: crop.width,
                got_h: crop.height,
                want_w: self.window_w,
                want_h: self.window_h,
            });
        }
        let changed = match &self.prev_crop {
            Some(prev) => changed_pixels(prev, &crop),
            None => crop.count_not(BACKGROUND_INDEX) as u64,
        };
        self.last_changed = changed;
        self.bps = changed * config.ticks_per_second() * u64::from(config.bits_per_changed_pixel);
        self.prev_crop = Some(crop);
        Ok(self.bps)
    }
}
