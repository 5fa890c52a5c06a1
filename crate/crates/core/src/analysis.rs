//! Cohort aggregation over parsed logs.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use crate::logkit::{format_g6, integer_mean, LogRecord, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventLabel {
    /// A lost-to-found transition.
    F,
    /// A found-to-lost transition.
    L,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    /// 1-based position in the interleaved sequence.
    pub index: usize,
    pub bps: u64,
    pub label: EventLabel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub name: String,
    pub record: LogRecord,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cohort {
    pub label: String,
    pub members: Vec<Member>,
}

impl Cohort {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), members: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, record: LogRecord) {
        self.members.push(Member { name: name.into(), record });
    }

    pub fn records(&self) -> impl Iterator<Item = &LogRecord> {
        self.members.iter().map(|m| &m.record)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// F, L, F, L, ... starting with the first lost-to-found value. Once one
/// sequence runs out the rest of the other is not interleaved.
pub fn interleaved_curve(record: &LogRecord) -> Vec<CurvePoint> {
    let mut out = Vec::with_capacity(record.lost2found.len() + record.found2lost.len());
    for i in 0..record.lost2found.len() {
        out.push((record.lost2found[i], EventLabel::F));
        match record.found2lost.get(i) {
            Some(&v) => out.push((v, EventLabel::L)),
            None => break,
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, (bps, label))| CurvePoint { index: i + 1, bps, label })
        .collect()
}

/// Per-index means of the finding (lost2found) and losing (found2lost)
/// sequences across a cohort. Index 0 of each vector is event 1.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AveragedCurves {
    pub finding: Vec<f64>,
    pub finding_support: Vec<usize>,
    pub losing: Vec<f64>,
    pub losing_support: Vec<usize>,
}

fn column_means<'a>(seqs: impl Iterator<Item = &'a [u64]>) -> (Vec<f64>, Vec<usize>) {
    let mut sums: Vec<u128> = Vec::new();
    let mut support: Vec<usize> = Vec::new();
    for seq in seqs {
        if seq.len() > sums.len() {
            sums.resize(seq.len(), 0);
            support.resize(seq.len(), 0);
        }
        for (i, &v) in seq.iter().enumerate() {
            sums[i] += u128::from(v);
            support[i] += 1;
        }
    }
    let means = sums.iter().zip(&support).map(|(&s, &n)| s as f64 / n as f64).collect();
    (means, support)
}

/// Ragged tails are averaged over whichever members reach that index; the
/// support columns say how many.
pub fn averaged_curves(cohort: &Cohort) -> AveragedCurves {
    let (finding, finding_support) = column_means(cohort.records().map(|r| r.lost2found.as_slice()));
    let (losing, losing_support) = column_means(cohort.records().map(|r| r.found2lost.as_slice()));
    AveragedCurves { finding, finding_support, losing, losing_support }
}

/// Members counted by total transition count `len(lost2found) + len(found2lost)`.
pub fn size_histogram(cohort: &Cohort) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for r in cohort.records() {
        *hist.entry(r.lost2found.len() + r.found2lost.len()).or_insert(0) += 1;
    }
    hist
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CohortStats {
    pub mean_kilobytes: f64,
    pub mean_noc: f64,
    pub n: usize,
}

pub fn cohort_stats(cohort: &Cohort) -> CohortStats {
    let n = cohort.len();
    let denom = n.max(1) as f64;
    CohortStats {
        mean_kilobytes: cohort.records().map(|r| r.kilobytes).sum::<f64>() / denom,
        mean_noc: cohort.records().map(|r| r.noc as f64).sum::<f64>() / denom,
        n,
    }
}

/// Whether the record's lost-to-found mean is below its found-to-lost mean.
pub fn hypothesis_flag(record: &LogRecord) -> Relation {
    Relation::from_means(integer_mean(&record.lost2found), integer_mean(&record.found2lost))
}

fn write_rows(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> io::Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()
}

pub fn export_curves_csv(curves: &AveragedCurves, path: &Path) -> io::Result<()> {
    let len = curves.finding.len().max(curves.losing.len());
    let cell = |v: Option<&f64>| v.map_or_else(String::new, |x| x.to_string());
    let count = |v: Option<&usize>| v.copied().unwrap_or(0).to_string();
    let rows = (0..len)
        .map(|i| {
            vec![
                (i + 1).to_string(),
                cell(curves.finding.get(i)),
                count(curves.finding_support.get(i)),
                cell(curves.losing.get(i)),
                count(curves.losing_support.get(i)),
            ]
        })
        .collect();
    write_rows(
        path,
        &["event", "finding_mean_bps", "finding_support", "losing_mean_bps", "losing_support"],
        rows,
    )
}

pub fn export_histogram_csv(hist: &BTreeMap<usize, usize>, path: &Path) -> io::Result<()> {
    let rows = hist.iter().map(|(size, count)| vec![size.to_string(), count.to_string()]).collect();
    write_rows(path, &["events", "participants"], rows)
}

/// One row per member in cohort order.
pub fn export_table_csv(cohort: &Cohort, path: &Path) -> io::Result<()> {
    let rows = cohort
        .members
        .iter()
        .map(|m| {
            let r = &m.record;
            vec![
                m.name.clone(),
                r.time_ticks.to_string(),
                r.noc.to_string(),
                r.nop.to_string(),
                r.lost.len().to_string(),
                r.found.len().to_string(),
                r.lost2found.len().to_string(),
                r.found2lost.len().to_string(),
                r.mean_l2f.to_string(),
                r.mean_f2l.to_string(),
                format_g6(r.kilobytes),
                matches!(hypothesis_flag(r), Relation::Less).to_string(),
            ]
        })
        .collect();
    write_rows(
        path,
        &[
            "name",
            "time_ticks",
            "noc",
            "nop",
            "n_lost",
            "n_found",
            "n_lost2found",
            "n_found2lost",
            "mean_lost2found",
            "mean_found2lost",
            "kilobytes",
            "l2f_below_f2l",
        ],
        rows,
    )
}
