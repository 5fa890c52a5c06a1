//! Session configuration and its flat `key = value` text form.
//!
//! The same key names are accepted from config files, `--set key=value`
//! command-line overrides and the live channel's `config_overrides` object.

use std::fmt;
use std::str::FromStr;

use crate::error::ConfigError;

/// Palette index painted behind every box.
pub const BACKGROUND_INDEX: u8 = 0;
/// Palette index reserved for the hero box.
pub const HERO_INDEX: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

impl FromStr for Rgb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hex = s.trim().trim_start_matches('#');
        if hex.len() != 6 || !hex.is_ascii() {
            return Err(format!("`{s}` is not a #rrggbb color"));
        }
        let channel = |i: usize| {
            u8::from_str_radix(&hex[i..i + 2], 16).map_err(|e| format!("`{s}`: {e}"))
        };
        Ok(Rgb(channel(0)?, channel(2)?, channel(4)?))
    }
}

/// Black background with the Okabe-Ito hues, which stay distinguishable under
/// the common color-vision deficiencies. White is the hero.
pub fn default_palette() -> Vec<Rgb> {
    vec![
        Rgb(0x00, 0x00, 0x00),
        Rgb(0xff, 0xff, 0xff),
        Rgb(0xe6, 0x9f, 0x00),
        Rgb(0x56, 0xb4, 0xe9),
        Rgb(0x00, 0x9e, 0x73),
        Rgb(0xf0, 0xe4, 0x42),
        Rgb(0x00, 0x72, 0xb2),
        Rgb(0xd5, 0x5e, 0x00),
        Rgb(0xcc, 0x79, 0xa7),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionConfig {
    pub tick_ms: u32,
    pub duration_ticks: u64,
    pub dist_threshold_sq: i64,
    pub run_length: u32,
    pub width: u32,
    pub height: u32,
    pub window_w: u32,
    pub window_h: u32,
    pub initial_noc: usize,
    pub noc_min: usize,
    pub noc_max: usize,
    pub initial_speed: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    pub inc_boxes: usize,
    pub dec_boxes: usize,
    pub speed_factor_up: f64,
    pub speed_factor_down: f64,
    pub box_half_min: u32,
    pub box_half_max: u32,
    pub hero_half_width: u32,
    pub hero_half_height: u32,
    pub palette: Vec<Rgb>,
    pub bits_per_changed_pixel: u32,
    pub rng_seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            tick_ms: 100,
            duration_ticks: 6000,
            dist_threshold_sq: 121,
            run_length: 12,
            width: 1024,
            height: 768,
            window_w: 256,
            window_h: 256,
            initial_noc: 10,
            noc_min: 2,
            noc_max: 200,
            initial_speed: 2.0,
            speed_min: 0.5,
            speed_max: 40.0,
            inc_boxes: 1,
            dec_boxes: 1,
            speed_factor_up: 1.05,
            speed_factor_down: 1.0 / 1.05,
            box_half_min: 12,
            box_half_max: 36,
            hero_half_width: 15,
            hero_half_height: 10,
            palette: default_palette(),
            bits_per_changed_pixel: 1,
            rng_seed: 0,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e: T::Err| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

macro_rules! config_keys {
    ($($field:ident),* $(,)?) => {
        /// Every key accepted by [`SessionConfig::set`], in file order.
        pub const KEYS: &[&str] = &[$(stringify!($field),)* "palette"];

        impl SessionConfig {
            /// Overrides one field from its textual form.
            pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
                match key.trim() {
                    $(stringify!($field) => self.$field = parse_value(stringify!($field), value)?,)*
                    "palette" => {
                        self.palette = value
                            .split(',')
                            .filter(|s| !s.trim().is_empty())
                            .map(|s| s.parse::<Rgb>())
                            .collect::<Result<_, _>>()
                            .map_err(|reason| ConfigError::BadValue {
                                key: "palette".into(),
                                value: value.to_string(),
                                reason,
                            })?;
                    }
                    other => return Err(ConfigError::UnknownKey(other.to_string())),
                }
                Ok(())
            }

            /// `key = value` lines that [`SessionConfig::from_kv_str`] reads back.
            pub fn to_kv_lines(&self) -> Vec<String> {
                let mut lines = vec![$(format!("{} = {}", stringify!($field), self.$field),)*];
                let palette: Vec<String> = self.palette.iter().map(Rgb::to_string).collect();
                lines.push(format!("palette = {}", palette.join(",")));
                lines
            }
        }
    };
}

config_keys!(
    tick_ms,
    duration_ticks,
    dist_threshold_sq,
    run_length,
    width,
    height,
    window_w,
    window_h,
    initial_noc,
    noc_min,
    noc_max,
    initial_speed,
    speed_min,
    speed_max,
    inc_boxes,
    dec_boxes,
    speed_factor_up,
    speed_factor_down,
    box_half_min,
    box_half_max,
    hero_half_width,
    hero_half_height,
    bits_per_changed_pixel,
    rng_seed,
);

impl SessionConfig {
    /// Applies a flat `key = value` file on top of `self`. Blank lines and
    /// `#` comments are skipped.
    pub fn apply_kv_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_kv_str(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        config.apply_kv_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        if self.width == 0 || self.height == 0 {
            return fail("world bounds must be positive".into());
        }
        if self.window_w == 0 || self.window_h == 0 {
            return fail("meter window must be positive".into());
        }
        if self.tick_ms == 0 || self.duration_ticks == 0 {
            return fail("tick_ms and duration_ticks must be positive".into());
        }
        if self.noc_min == 0 {
            return fail("noc_min must be at least 1".into());
        }
        if !(self.noc_min <= self.initial_noc && self.initial_noc <= self.noc_max) {
            return fail(format!(
                "need noc_min <= initial_noc <= noc_max, got {} / {} / {}",
                self.noc_min, self.initial_noc, self.noc_max
            ));
        }
        let speeds = [self.initial_speed, self.speed_min, self.speed_max];
        if speeds.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return fail("speeds must be finite and non-negative".into());
        }
        if !(self.speed_min <= self.initial_speed && self.initial_speed <= self.speed_max) {
            return fail(format!(
                "need speed_min <= initial_speed <= speed_max, got {} / {} / {}",
                self.speed_min, self.initial_speed, self.speed_max
            ));
        }
        if !(self.speed_factor_up >= 1.0
            && self.speed_factor_down <= 1.0
            && self.speed_factor_down > 0.0)
        {
            return fail("need speed_factor_up >= 1 >= speed_factor_down > 0".into());
        }
        if self.box_half_min == 0 || self.box_half_min > self.box_half_max {
            return fail("need 1 <= box_half_min <= box_half_max".into());
        }
        if self.hero_half_width == 0 || self.hero_half_height == 0 {
            return fail("hero half extents must be positive".into());
        }
        let widest = self.box_half_max.max(self.hero_half_width);
        let tallest = self.box_half_max.max(self.hero_half_height);
        if 2 * widest > self.width || 2 * tallest > self.height {
            return fail("boxes do not fit inside the world bounds".into());
        }
        if self.palette.len() < 3 || self.palette.len() > 256 {
            return fail("palette needs background, hero and at least one box color (max 256)".into());
        }
        if self.dist_threshold_sq < 0 {
            return fail("dist_threshold_sq must be non-negative".into());
        }
        Ok(())
    }

    /// Ticks per second of the fixed-timestep loop (10 at the standard 100 ms).
    pub fn ticks_per_second(&self) -> u64 {
        u64::from(1000 / self.tick_ms)
    }
}
