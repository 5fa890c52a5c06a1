//! The BrainB text log: scoring, writing, parsing and the final-frame PNG.
//!
//! ```text
//! NEMESPOR BrainB Test 6.0.3
//! time      : 6000
//! bps       : 28170
//! noc       : 71
//! nop       : 0
//! lost      :
//! 30530 31840 ...
//! mean      : 54181
//! var       : 18541.5
//! ...
//! mean(lost2found) < mean(found2lost)
//! time      : 10:0
//! U R about 6.37927 Kilobytes
//! ```

use std::fmt::Write as _;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};

use crate::config::Rgb;
use crate::error::{FrameError, LogError};
use crate::meter::Bitmap;

/// Version line written by this implementation.
pub const VERSION: &str = "NEMESPOR BrainB Test 6.0.3-reimpl";
/// Version line of the original Series 6 program.
pub const ORIGINAL_VERSION: &str = "NEMESPOR BrainB Test 6.0.3";

const VALUES_PER_LINE: usize = 9;
/// The transition blocks start their numbers on the header line, which
/// leaves room for seven values next to the label.
const VALUES_ON_HEADER_LINE: usize = 7;

/// Truncating mean; 0 for an empty sequence.
pub fn integer_mean(seq: &[u64]) -> u64 {
    if seq.is_empty() {
        return 0;
    }
    seq.iter().sum::<u64>() / seq.len() as u64
}

/// Sample standard deviation (n - 1 denominator); 0 below two values.
pub fn dispersion(seq: &[u64]) -> f64 {
    if seq.len() < 2 {
        return 0.0;
    }
    let n = seq.len() as f64;
    let mean = seq.iter().map(|&v| v as f64).sum::<f64>() / n;
    let ss: f64 = seq.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Headline score: the average of the two integer transition means,
/// converted from bits to kilobytes.
pub fn final_kilobytes(lost2found: &[u64], found2lost: &[u64]) -> f64 {
    let m1 = integer_mean(lost2found) as f64;
    let m2 = integer_mean(found2lost) as f64;
    ((m1 + m2) / 2.0) / 8.0 / 1024.0
}

/// `minutes:seconds` without padding, as in `10:0`.
pub fn time_string(ticks: u64, tick_ms: u32) -> String {
    let secs = ticks * u64::from(tick_ms) / 1000;
    format!("{}:{}", secs / 60, secs % 60)
}

/// Formats like a default C++ output stream (`%g`, six significant digits).
pub fn format_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_fraction(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Less,
    NotLess,
}

impl Relation {
    pub fn from_means(mean_l2f: u64, mean_f2l: u64) -> Self {
        if mean_l2f < mean_f2l {
            Relation::Less
        } else {
            Relation::NotLess
        }
    }

    pub fn line(self) -> &'static str {
        match self {
            Relation::Less => "mean(lost2found) < mean(found2lost)",
            Relation::NotLess => "mean(lost2found) >= mean(found2lost)",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogRecord {
    pub version: String,
    pub time_ticks: u64,
    pub bps_final: u64,
    pub noc: u64,
    pub nop: u64,
    pub lost: Vec<u64>,
    pub found: Vec<u64>,
    pub lost2found: Vec<u64>,
    pub found2lost: Vec<u64>,
    pub mean_lost: u64,
    pub mean_found: u64,
    pub mean_l2f: u64,
    pub mean_f2l: u64,
    pub disp_lost: f64,
    pub disp_found: f64,
    pub disp_l2f: f64,
    pub disp_f2l: f64,
    pub relation: Relation,
    pub time_string: String,
    pub kilobytes: f64,
}

/// The raw measurements a record is built from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecordInputs {
    pub time_ticks: u64,
    pub tick_ms: u32,
    pub bps_final: u64,
    pub noc: u64,
    pub nop: u64,
    pub lost: Vec<u64>,
    pub found: Vec<u64>,
    pub lost2found: Vec<u64>,
    pub found2lost: Vec<u64>,
}

impl LogRecord {
    /// Builds a consistent record, deriving every statistic.
    pub fn new(inputs: RecordInputs) -> Self {
        let mean_l2f = integer_mean(&inputs.lost2found);
        let mean_f2l = integer_mean(&inputs.found2lost);
        Self {
            version: VERSION.to_string(),
            time_ticks: inputs.time_ticks,
            bps_final: inputs.bps_final,
            noc: inputs.noc,
            nop: inputs.nop,
            mean_lost: integer_mean(&inputs.lost),
            mean_found: integer_mean(&inputs.found),
            mean_l2f,
            mean_f2l,
            disp_lost: dispersion(&inputs.lost),
            disp_found: dispersion(&inputs.found),
            disp_l2f: dispersion(&inputs.lost2found),
            disp_f2l: dispersion(&inputs.found2lost),
            relation: Relation::from_means(mean_l2f, mean_f2l),
            time_string: time_string(inputs.time_ticks, inputs.tick_ms),
            kilobytes: final_kilobytes(&inputs.lost2found, &inputs.found2lost),
            lost: inputs.lost,
            found: inputs.found,
            lost2found: inputs.lost2found,
            found2lost: inputs.found2lost,
        }
    }

    /// Names the first derived field that disagrees with the sequences.
    pub fn check_consistency(&self) -> Result<(), LogError> {
        let blocks = [
            ("lost", &self.lost, self.mean_lost, self.disp_lost),
            ("found", &self.found, self.mean_found, self.disp_found),
            ("lost2found", &self.lost2found, self.mean_l2f, self.disp_l2f),
            ("found2lost", &self.found2lost, self.mean_f2l, self.disp_f2l),
        ];
        for (name, seq, mean, disp) in blocks {
            if integer_mean(seq) != mean {
                return Err(LogError::Inconsistent(format!("mean of {name}")));
            }
            if dispersion(seq) != disp {
                return Err(LogError::Inconsistent(format!("var of {name}")));
            }
        }
        if Relation::from_means(self.mean_l2f, self.mean_f2l) != self.relation {
            return Err(LogError::Inconsistent("relation".into()));
        }
        if final_kilobytes(&self.lost2found, &self.found2lost) != self.kilobytes {
            return Err(LogError::Inconsistent("kilobytes".into()));
        }
        if !is_time_string(&self.time_string) {
            return Err(LogError::Inconsistent("time string".into()));
        }
        if self.version.contains('\n') {
            return Err(LogError::Inconsistent("version".into()));
        }
        Ok(())
    }
}

fn is_time_string(s: &str) -> bool {
    match s.split_once(':') {
        Some((m, sec)) => m.parse::<u64>().is_ok() && sec.parse::<u64>().is_ok_and(|v| v < 60),
        None => false,
    }
}

fn label(name: &str) -> String {
    format!("{name:<10}: ")
}

fn write_block(out: &mut String, name: &str, seq: &[u64], mean: u64, disp: f64, inline: bool) {
    out.push_str(&label(name));
    let mut rest = seq;
    if inline {
        let take = rest.len().min(VALUES_ON_HEADER_LINE);
        for v in &rest[..take] {
            let _ = write!(out, "{v} ");
        }
        rest = &rest[take..];
    }
    out.push('\n');
    for chunk in rest.chunks(VALUES_PER_LINE) {
        for v in chunk {
            let _ = write!(out, "{v} ");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "{}{mean}", label("mean"));
    let _ = writeln!(out, "{}{}", label("var"), format_g6(disp));
}

/// Renders a record in the log layout. Refuses records whose derived fields
/// do not match their sequences.
pub fn write_log(record: &LogRecord) -> Result<String, LogError> {
    record.check_consistency()?;
    let mut out = String::new();
    let _ = writeln!(out, "{}", record.version);
    let _ = writeln!(out, "{}{}", label("time"), record.time_ticks);
    let _ = writeln!(out, "{}{}", label("bps"), record.bps_final);
    let _ = writeln!(out, "{}{}", label("noc"), record.noc);
    let _ = writeln!(out, "{}{}", label("nop"), record.nop);
    write_block(&mut out, "lost", &record.lost, record.mean_lost, record.disp_lost, false);
    write_block(&mut out, "found", &record.found, record.mean_found, record.disp_found, false);
    write_block(&mut out, "lost2found", &record.lost2found, record.mean_l2f, record.disp_l2f, true);
    write_block(&mut out, "found2lost", &record.found2lost, record.mean_f2l, record.disp_f2l, true);
    let _ = writeln!(out, "{}", record.relation.line());
    let _ = writeln!(out, "{}{}", label("time"), record.time_string);
    let _ = writeln!(out, "U R about {} Kilobytes", format_g6(record.kilobytes));
    Ok(out)
}

/// A printed value that disagrees with what the sequences imply.
#[derive(Clone, Debug, PartialEq)]
pub enum ConsistencyWarning {
    Mean { block: String, printed: u64, computed: u64 },
    Dispersion { block: String, printed: f64, computed: f64 },
    Relation { printed: Relation, computed: Relation },
    Kilobytes { printed: f64, computed: f64 },
    TimeString { printed: String, expected: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedLog {
    /// Derived fields are recomputed from the parsed sequences.
    pub record: LogRecord,
    pub warnings: Vec<ConsistencyWarning>,
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let last_line = text.lines().count() + 1;
        Self { lines, pos: 0, last_line }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn missing(&self, field: &str) -> LogError {
        LogError::Missing {
            field: field.to_string(),
            line: self.peek().map_or(self.last_line, |(n, _)| n),
        }
    }

    /// Consumes `key : value` and returns the trimmed value.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str), LogError> {
        match self.peek().and_then(|(n, l)| l.split_once(':').map(|(k, v)| (n, k, v))) {
            Some((n, k, v)) if k.trim() == key => {
                self.pos += 1;
                Ok((n, v.trim()))
            }
            _ => Err(self.missing(key)),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, LogError> {
        let (line, value) = self.field(key)?;
        value.parse().map_err(|_| LogError::MalformedNumber {
            field: key.to_string(),
            token: value.to_string(),
            line,
        })
    }

    fn block(&mut self, key: &str) -> Result<(Vec<u64>, u64, f64), LogError> {
        let (line, first) = self.field(key)?;
        let mut values = Vec::new();
        let mut push_tokens = |text: &str, line: usize| -> Result<(), LogError> {
            for token in text.split_whitespace() {
                values.push(token.parse().map_err(|_| LogError::MalformedNumber {
                    field: key.to_string(),
                    token: token.to_string(),
                    line,
                })?);
            }
            Ok(())
        };
        push_tokens(first, line)?;
        while let Some((n, l)) = self.peek() {
            if l.contains(':') {
                break;
            }
            push_tokens(l, n)?;
            self.pos += 1;
        }
        let mean = self.number("mean")?;
        let var = self.number("var")?;
        Ok((values, mean, var))
    }
}

/// Parses a log. Whitespace and line wrapping inside number lists are free.
pub fn parse_log(text: &str) -> Result<ParsedLog, LogError> {
    let mut lines = Lines::new(text);
    let (line, version) = lines.peek().ok_or_else(|| lines.missing("version"))?;
    if version != VERSION && version != ORIGINAL_VERSION {
        return Err(LogError::UnknownVersion { line, found: version.to_string() });
    }
    lines.pos += 1;

    let time_ticks: u64 = lines.number("time")?;
    let bps_final = lines.number("bps")?;
    let noc = lines.number("noc")?;
    let nop = lines.number("nop")?;
    let (lost, p_mean_lost, p_var_lost) = lines.block("lost")?;
    let (found, p_mean_found, p_var_found) = lines.block("found")?;
    let (lost2found, p_mean_l2f, p_var_l2f) = lines.block("lost2found")?;
    let (found2lost, p_mean_f2l, p_var_f2l) = lines.block("found2lost")?;

    let printed_relation = match lines.peek() {
        Some((_, l)) if l.replace(' ', "") == "mean(lost2found)<mean(found2lost)" => Relation::Less,
        Some((_, l)) if l.replace(' ', "") == "mean(lost2found)>=mean(found2lost)" => {
            Relation::NotLess
        }
        _ => return Err(lines.missing("relation")),
    };
    lines.pos += 1;
    let (_, printed_time) = lines.field("time")?;
    let printed_time = printed_time.to_string();

    let printed_kb = match lines.peek() {
        Some((n, l)) if l.starts_with("U R about") => {
            let token = l
                .trim_start_matches("U R about")
                .trim()
                .trim_end_matches("Kilobytes")
                .trim();
            lines.pos += 1;
            token.parse::<f64>().map_err(|_| LogError::MalformedNumber {
                field: "U R about".into(),
                token: token.to_string(),
                line: n,
            })?
        }
        _ => return Err(lines.missing("U R about")),
    };
    if let Some((line, content)) = lines.peek() {
        return Err(LogError::Unexpected { line, content: content.to_string() });
    }

    let mut record = LogRecord::new(RecordInputs {
        time_ticks,
        tick_ms: 100,
        bps_final,
        noc,
        nop,
        lost,
        found,
        lost2found,
        found2lost,
    });
    record.version = version.to_string();

    let mut warnings = Vec::new();
    let printed = [
        ("lost", p_mean_lost, p_var_lost, record.mean_lost, record.disp_lost),
        ("found", p_mean_found, p_var_found, record.mean_found, record.disp_found),
        ("lost2found", p_mean_l2f, p_var_l2f, record.mean_l2f, record.disp_l2f),
        ("found2lost", p_mean_f2l, p_var_f2l, record.mean_f2l, record.disp_f2l),
    ];
    for (block, p_mean, p_var, mean, disp) in printed {
        if p_mean != mean {
            warnings.push(ConsistencyWarning::Mean { block: block.into(), printed: p_mean, computed: mean });
        }
        if format_g6(p_var) != format_g6(disp) {
            warnings.push(ConsistencyWarning::Dispersion { block: block.into(), printed: p_var, computed: disp });
        }
    }
    if printed_relation != record.relation {
        warnings.push(ConsistencyWarning::Relation { printed: printed_relation, computed: record.relation });
    }
    if format_g6(printed_kb) != format_g6(record.kilobytes) {
        warnings.push(ConsistencyWarning::Kilobytes { printed: printed_kb, computed: record.kilobytes });
    }
    if printed_time != record.time_string {
        if is_time_string(&printed_time) {
            warnings.push(ConsistencyWarning::TimeString {
                printed: printed_time.clone(),
                expected: record.time_string.clone(),
            });
            record.time_string = printed_time;
        } else {
            return Err(LogError::MalformedNumber {
                field: "time".into(),
                token: printed_time,
                line: lines.last_line,
            });
        }
    }
    Ok(ParsedLog { record, warnings })
}

/// PNG bytes of a palette-index bitmap.
pub fn encode_png(bitmap: &Bitmap, palette: &[Rgb]) -> Result<Vec<u8>, FrameError> {
    let mut rgb = Vec::with_capacity(bitmap.pixels.len() * 3);
    for (i, &index) in bitmap.pixels.iter().enumerate() {
        let Rgb(r, g, b) = *palette.get(index as usize).ok_or(FrameError::PaletteIndex {
            x: (i % bitmap.width as usize) as u32,
            y: (i / bitmap.width as usize) as u32,
            index,
            len: palette.len(),
        })?;
        rgb.extend_from_slice(&[r, g, b]);
    }
    let mut out = Vec::new();
    PngEncoder::new(&mut out).write_image(&rgb, bitmap.width, bitmap.height, ExtendedColorType::Rgb8)?;
    Ok(out)
}

/// Writes the final synthetic frame as a PNG. Nothing is written if any
/// pixel is outside the palette.
pub fn write_final_frame(bitmap: &Bitmap, palette: &[Rgb], path: &Path) -> Result<(), FrameError> {
    let bytes = encode_png(bitmap, palette)?;
    std::fs::write(path, bytes).map_err(|source| FrameError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_matches_stream_output() {
        assert_eq!(format_g6(6.3792724609375), "6.37927");
        assert_eq!(format_g6(18541.54), "18541.5");
        assert_eq!(format_g6(0.0), "0");
        assert_eq!(format_g6(1.0), "1");
        assert_eq!(format_g6(123456.7), "123457");
        assert_eq!(format_g6(1234567.0), "1.23457e+06");
        assert_eq!(format_g6(0.000123456), "0.000123456");
        assert_eq!(format_g6(0.0000123456), "1.23456e-05");
        assert_eq!(format_g6(999999.5), "1e+06");
        assert_eq!(format_g6(2.5), "2.5");
    }

    #[test]
    fn integer_mean_truncates() {
        assert_eq!(integer_mean(&[]), 0);
        assert_eq!(integer_mean(&[1, 2]), 1);
        assert_eq!(integer_mean(&[7]), 7);
    }

    #[test]
    fn dispersion_degenerate_cases() {
        assert_eq!(dispersion(&[]), 0.0);
        assert_eq!(dispersion(&[5]), 0.0);
        assert_eq!(dispersion(&[4, 4, 4, 4]), 0.0);
        assert!((dispersion(&[1, 3]) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kilobytes_edge_cases() {
        assert_eq!(final_kilobytes(&[], &[]), 0.0);
        assert_eq!(final_kilobytes(&[0], &[16384]), 1.0);
    }

    #[test]
    fn time_strings() {
        assert_eq!(time_string(6000, 100), "10:0");
        assert_eq!(time_string(1200, 100), "2:0");
        assert_eq!(time_string(100, 100), "0:10");
        assert_eq!(time_string(655, 100), "1:5");
    }

    #[test]
    fn empty_record_writes_empty_blocks() {
        let record = LogRecord::new(RecordInputs { tick_ms: 100, noc: 2, ..Default::default() });
        let text = write_log(&record).unwrap();
        assert!(text.contains("lost      : \nmean      : 0\nvar       : 0\n"));
        assert!(text.contains("lost2found: \nmean      : 0\n"));
        assert!(text.contains("nop       : 0\n"));
        assert!(text.contains("mean(lost2found) >= mean(found2lost)\n"));
        assert!(text.ends_with("time      : 0:0\nU R about 0 Kilobytes\n"));
        assert_eq!(parse_log(&text).unwrap().record, record);
    }

    #[test]
    fn inconsistent_record_is_refused() {
        let mut record = LogRecord::new(RecordInputs {
            tick_ms: 100,
            lost2found: vec![10, 20],
            found2lost: vec![30],
            ..Default::default()
        });
        record.mean_l2f = 99;
        assert_eq!(write_log(&record), Err(LogError::Inconsistent("mean of lost2found".into())));
    }

    #[test]
    fn wrapping_layout() {
        let record = LogRecord::new(RecordInputs {
            tick_ms: 100,
            lost: (1..=10).collect(),
            lost2found: (1..=10).collect(),
            ..Default::default()
        });
        let text = write_log(&record).unwrap();
        assert!(text.contains("lost      : \n1 2 3 4 5 6 7 8 9 \n10 \nmean"));
        assert!(text.contains("lost2found: 1 2 3 4 5 6 7 \n8 9 10 \nmean"));
    }

    #[test]
    fn unknown_version_is_rejected() {
        let err = parse_log("BrainB 5\ntime : 1\n").unwrap_err();
        assert_eq!(err, LogError::UnknownVersion { line: 1, found: "BrainB 5".into() });
    }

    #[test]
    fn malformed_number_names_line() {
        let record = LogRecord::new(RecordInputs { tick_ms: 100, found: vec![1, 2, 3], ..Default::default() });
        let text = write_log(&record).unwrap().replace("1 2 3", "1 2x 3");
        let err = parse_log(&text).unwrap_err();
        assert!(matches!(err, LogError::MalformedNumber { ref token, .. } if token == "2x"), "{err:?}");
    }

    #[test]
    fn palette_overflow_is_caught_before_writing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.png");
        let mut bitmap = Bitmap::filled(2, 2, 0);
        bitmap.set(1, 1, 9);
        let err = write_final_frame(&bitmap, &[Rgb(0, 0, 0), Rgb(1, 1, 1)], &path).unwrap_err();
        assert!(matches!(err, FrameError::PaletteIndex { x: 1, y: 1, index: 9, len: 2 }));
        assert!(!path.exists());
    }
}
