//! Dataset manifest: a TOML file listing the recording parameters and every
//! trial of every subject. Trial paths are relative to the manifest.
//!
//! ```toml
//! name = "riken-labsp"
//! sampling_rate = 256.0
//! channels = ["Oz"]
//! targets = [8.0, 14.0, 28.0]
//!
//! [[subjects]]
//! id = "Subject1"
//!
//! [[subjects.trials]]
//! file = "Subject1/trial_000.csv"
//! stimulus_frequency = 8.0
//! duration = 15.0
//! ```

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::trial_csv::read_trial_csv;
use crate::pipeline::LabeledTrial;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub sampling_rate: f64,
    pub channels: Vec<String>,
    pub targets: Vec<f64>,
    #[serde(default)]
    pub subjects: Vec<SubjectEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectEntry {
    pub id: String,
    #[serde(default)]
    pub trials: Vec<TrialEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEntry {
    pub file: String,
    pub stimulus_frequency: f64,
    pub duration: f64,
}

impl DatasetManifest {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Dataset(e.to_string()))
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::parse(path, e.message()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).map_err(|e| Error::io(path, e))
    }

    pub fn trial_count(&self) -> usize {
        self.subjects.iter().map(|s| s.trials.len()).sum()
    }

    /// Checks that do not need the trial files.
    pub fn validate(&self) -> Result<()> {
        if !(self.sampling_rate.is_finite() && self.sampling_rate > 0.0) {
            return Err(Error::Dataset(format!(
                "sampling rate must be positive, got {}",
                self.sampling_rate
            )));
        }
        if self.channels.is_empty() {
            return Err(Error::Dataset("no channels".into()));
        }
        if self.targets.is_empty() || self.targets.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Dataset(
                "targets must be a non-empty, strictly ascending list".into(),
            ));
        }
        if self.subjects.is_empty() {
            return Err(Error::Dataset("no subjects".into()));
        }
        for subject in &self.subjects {
            for (i, trial) in subject.trials.iter().enumerate() {
                if !self.has_target(trial.stimulus_frequency) {
                    return Err(Error::Dataset(format!(
                        "subject {} trial {i} ({}): stimulus {} Hz is not in the target set {:?}",
                        subject.id, trial.file, trial.stimulus_frequency, self.targets
                    )));
                }
                if !(trial.duration.is_finite() && trial.duration > 0.0) {
                    return Err(Error::Dataset(format!(
                        "subject {} trial {i} ({}): duration must be positive",
                        subject.id, trial.file
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn has_target(&self, f: f64) -> bool {
        self.targets.iter().any(|t| (t - f).abs() < 1e-9)
    }
}

#[derive(Debug, Clone)]
pub struct Subject {
    pub id: String,
    pub trials: Vec<LabeledTrial>,
}

/// A manifest with every trial loaded and checked.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub root: PathBuf,
    pub subjects: Vec<Subject>,
}

impl Dataset {
    pub fn trial_count(&self) -> usize {
        self.subjects.iter().map(|s| s.trials.len()).sum()
    }
}

pub fn load_dataset(manifest_path: &Path) -> Result<Dataset> {
    let manifest = DatasetManifest::read(manifest_path)?;
    manifest.validate()?;
    let root = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let subjects = manifest
        .subjects
        .iter()
        .map(|entry| {
            let trials = entry
                .trials
                .par_iter()
                .enumerate()
                .map(|(i, t)| load_trial(&manifest, &root, &entry.id, i, t))
                .collect::<Result<Vec<_>>>()?;
            Ok(Subject {
                id: entry.id.clone(),
                trials,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        manifest,
        root,
        subjects,
    })
}

fn load_trial(
    manifest: &DatasetManifest,
    root: &Path,
    subject: &str,
    index: usize,
    entry: &TrialEntry,
) -> Result<LabeledTrial> {
    let path = root.join(&entry.file);
    let name = format!("subject {subject} trial {index} ({})", entry.file);
    if !path.is_file() {
        return Err(Error::Dataset(format!("{name}: missing file {}", path.display())));
    }
    let signal = read_trial_csv(&path, manifest.sampling_rate)?;
    if signal.channels() != manifest.channels.as_slice() {
        return Err(Error::Dataset(format!(
            "{name}: channel header {:?} does not match manifest channels {:?}",
            signal.channels(),
            manifest.channels
        )));
    }
    let expected = (entry.duration * manifest.sampling_rate).round() as usize;
    if signal.len() != expected {
        return Err(Error::Dataset(format!(
            "{name}: row count mismatch, {} rows for {} s at {} Hz (expected {expected})",
            signal.len(),
            entry.duration,
            manifest.sampling_rate
        )));
    }
    Ok(LabeledTrial {
        signal,
        frequency: entry.stimulus_frequency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::trial_csv::write_trial_csv;
    use crate::signal::SampledSignal;

    fn write_fixture(dir: &Path, stimulus: f64, rows: usize) -> PathBuf {
        let signal = SampledSignal::single("Oz", vec![0.5; rows], 10.0).unwrap();
        write_trial_csv(&dir.join("t0.csv"), &signal).unwrap();
        let manifest = DatasetManifest {
            name: "fixture".into(),
            sampling_rate: 10.0,
            channels: vec!["Oz".into()],
            targets: vec![8.0, 14.0, 28.0],
            subjects: vec![SubjectEntry {
                id: "S1".into(),
                trials: vec![TrialEntry {
                    file: "t0.csv".into(),
                    stimulus_frequency: stimulus,
                    duration: 2.0,
                }],
            }],
        };
        let path = dir.join("manifest.toml");
        manifest.write(&path).unwrap();
        path
    }

    #[test]
    fn loads_valid_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let ds = load_dataset(&write_fixture(dir.path(), 14.0, 20)).unwrap();
        assert_eq!(ds.trial_count(), 1);
        assert_eq!(ds.subjects[0].trials[0].frequency, 14.0);
    }

    #[test]
    fn unknown_stimulus_names_trial() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_dataset(&write_fixture(dir.path(), 11.0, 20)).unwrap_err().to_string();
        assert!(err.contains("S1 trial 0") && err.contains("11 Hz"), "{err}");
    }

    #[test]
    fn row_count_mismatch_names_trial() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_dataset(&write_fixture(dir.path(), 8.0, 19)).unwrap_err().to_string();
        assert!(err.contains("row count mismatch") && err.contains("t0.csv"), "{err}");
    }

    #[test]
    fn missing_file_names_trial() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_fixture(dir.path(), 8.0, 20);
        std::fs::remove_file(dir.path().join("t0.csv")).unwrap();
        let err = load_dataset(&path).unwrap_err().to_string();
        assert!(err.contains("missing file") && err.contains("trial 0"), "{err}");
    }

    #[test]
    fn empty_subjects_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.toml");
        std::fs::write(&path, "name = \"x\"\nsampling_rate = 1.0\nchannels = [\"Oz\"]\ntargets = [8.0]\n").unwrap();
        let err = load_dataset(&path).unwrap_err().to_string();
        assert!(err.contains("no subjects"), "{err}");
    }

    #[test]
    fn manifest_text_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_fixture(dir.path(), 8.0, 20);
        let m = DatasetManifest::read(&path).unwrap();
        let again = DatasetManifest::from_toml(&m.to_toml().unwrap(), &path).unwrap();
        assert_eq!(m, again);
    }
}
