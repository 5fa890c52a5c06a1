use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use brainb_core::analysis::{
    averaged_curves, cohort_stats, export_curves_csv, export_histogram_csv, export_table_csv,
    hypothesis_flag, size_histogram, Cohort,
};
use brainb_core::logkit::{format_g6, parse_log};
use brainb_core::Relation;
use clap::Args;

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Directory of `.log` files, one per participant.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, env = "BRAINB_OUT_DIR", default_value = ".")]
    pub out: PathBuf,
}

fn log_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "log") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let label = args.input.file_name().map_or_else(|| "cohort".into(), |n| n.to_string_lossy().into_owned());
    let mut cohort = Cohort::new(label);
    let mut corrupt = 0usize;
    for path in log_files(&args.input)? {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        // Non-UTF-8 content is a corrupt log, not an I/O failure.
        let parsed = fs::read(&path)
            .with_context(|| format!("reading {}", path.display()))
            .map(|bytes| String::from_utf8(bytes).map_err(|e| e.to_string()))?
            .and_then(|text| parse_log(&text).map_err(|e| e.to_string()));
        match parsed {
            Ok(parsed) => {
                for w in &parsed.warnings {
                    eprintln!("warning: {}: {w:?}", path.display());
                }
                cohort.push(stem, parsed.record);
            }
            Err(e) => {
                corrupt += 1;
                eprintln!("corrupt: {}: {e}", path.display());
            }
        }
    }
    if cohort.is_empty() {
        eprintln!("error: no parseable logs in {} ({corrupt} corrupt)", args.input.display());
        return Ok(ExitCode::from(1));
    }

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let curves = averaged_curves(&cohort);
    export_curves_csv(&curves, &args.out.join("curves.csv")).context("writing curves.csv")?;
    export_histogram_csv(&size_histogram(&cohort), &args.out.join("histogram.csv")).context("writing histogram.csv")?;
    export_table_csv(&cohort, &args.out.join("table.csv")).context("writing table.csv")?;

    let stats = cohort_stats(&cohort);
    let less = cohort.records().filter(|r| hypothesis_flag(r) == Relation::Less).count();
    println!("participants: {}", stats.n);
    println!("corrupt: {corrupt}");
    println!("mean kilobytes: {}", format_g6(stats.mean_kilobytes));
    println!("mean noc: {}", format_g6(stats.mean_noc));
    println!("mean(lost2found) < mean(found2lost): {less} of {}", stats.n);
    Ok(ExitCode::SUCCESS)
}
