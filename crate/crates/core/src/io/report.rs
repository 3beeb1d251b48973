use std::fmt::Write as _;
use std::path::Path;

use crate::metrics::SubjectReport;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Text,
}

const HEADER: [&str; 6] = ["subject", "trials", "method", "MDT(s)", "accuracy(%)", "ITR(bits/min)"];

fn cells(r: &SubjectReport) -> [String; 6] {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.1}"));
    [
        r.subject.clone(),
        r.trial_count.to_string(),
        r.method.clone(),
        opt(r.mdt_seconds),
        format!("{:.1}", 100.0 * r.accuracy),
        opt(r.itr_bits_per_minute),
    ]
}

fn non_empty(reports: &[SubjectReport]) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::InvalidConfig("no reports to export".into()));
    }
    Ok(())
}

pub fn render_csv(reports: &[SubjectReport]) -> Result<String> {
    non_empty(reports)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::InvalidConfig(e.to_string());
    writer.write_record(HEADER).map_err(to_err)?;
    for r in reports {
        writer.write_record(cells(r)).map_err(to_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Fixed-width table, one row per subject and method.
pub fn render_text(reports: &[SubjectReport]) -> Result<String> {
    non_empty(reports)?;
    let rows: Vec<[String; 6]> = reports.iter().map(cells).collect();
    let widths: Vec<usize> = (0..6)
        .map(|c| rows.iter().map(|r| r[c].len()).chain([HEADER[c].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let mut line = |cols: &[&str]| {
        let mut s = String::new();
        for (c, v) in cols.iter().enumerate() {
            if c > 0 {
                s.push_str("  ");
            }
            // text columns left aligned, numbers right aligned
            if c == 0 || c == 2 {
                let _ = write!(s, "{v:<w$}", w = widths[c]);
            } else {
                let _ = write!(s, "{v:>w$}", w = widths[c]);
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&HEADER);
    for r in &rows {
        line(&r.iter().map(String::as_str).collect::<Vec<_>>());
    }
    Ok(out)
}

pub fn export_report(reports: &[SubjectReport], format: ReportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ReportFormat::Csv => render_csv(reports)?,
        ReportFormat::Text => render_text(reports)?,
    };
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
