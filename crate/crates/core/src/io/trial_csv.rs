//! One trial per file: a header row of channel labels, then one row of
//! decimal values per sample instant.

use std::path::Path;

use crate::signal::SampledSignal;
use crate::{Error, Result};

pub fn read_trial_csv(path: &Path, sampling_rate: f64) -> Result<SampledSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let channels: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut samples = vec![Vec::new(); channels.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.len() != channels.len() {
            return Err(Error::parse(
                path,
                format!("row {} has {} values, expected {}", line + 2, record.len(), channels.len()),
            ));
        }
        for (column, field) in record.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| {
                Error::parse(path, format!("row {}: `{field}` is not a number", line + 2))
            })?;
            samples[column].push(value);
        }
    }
    SampledSignal::new(channels, samples, sampling_rate)
        .map_err(|e| Error::parse(path, e))
}

pub fn write_trial_csv(path: &Path, signal: &SampledSignal) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(signal.channels())
        .map_err(|e| csv_error(path, e))?;
    let mut row = Vec::with_capacity(signal.channel_count());
    for i in 0..signal.len() {
        row.clear();
        row.extend(signal.samples().iter().map(|c| c[i].to_string()));
        writer.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::parse(path, format!("{other:?}")),
        }
    } else {
        Error::parse(path, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let s = SampledSignal::new(
            vec!["O1".into(), "Oz".into()],
            vec![vec![0.1, -1e-300, 3.0], vec![1.0 / 3.0, 2.5e10, -0.0]],
            128.0,
        )
        .unwrap();
        write_trial_csv(&path, &s).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("O1,Oz\n"));
        assert_eq!(read_trial_csv(&path, 128.0).unwrap(), s);
    }

    #[test]
    fn bad_values_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "Oz\n1.0\nabc\n").unwrap();
        let err = read_trial_csv(&path, 128.0).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
        assert!(matches!(
            read_trial_csv(&dir.path().join("missing.csv"), 128.0),
            Err(Error::Io { .. })
        ));
    }
}
