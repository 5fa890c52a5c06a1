use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use brainb_core::logkit::{write_final_frame, write_log};
use brainb_core::{Bitmap, LogRecord, PointerTrace, SessionConfig};

/// Paths written for one session.
#[derive(Debug)]
pub struct Written {
    pub log: PathBuf,
}

/// Writes `<stem>.log`, `<stem>.png` and, when given, `<stem>.trace`.
pub fn write_session(
    dir: &Path,
    stem: &str,
    record: &LogRecord,
    frame: &Bitmap,
    config: &SessionConfig,
    trace: Option<&PointerTrace>,
) -> anyhow::Result<Written> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let log = dir.join(format!("{stem}.log"));
    let text = write_log(record)?;
    fs::write(&log, text).with_context(|| format!("writing {}", log.display()))?;
    write_final_frame(frame, &config.palette, &dir.join(format!("{stem}.png")))?;
    if let Some(trace) = trace {
        let path = dir.join(format!("{stem}.trace"));
        fs::write(&path, trace.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Written { log })
}
