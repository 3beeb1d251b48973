use std::path::Path;

use bifb::baseline::{PsdaConfig, PsdaDetector};
use bifb::bifb::{BifbDetector, FilterBank};
use bifb::io::{
    export_report, load_dataset, synth_trial, write_trial_csv, DatasetManifest, ReportFormat, SubjectEntry,
    SynthSpec, TrialEntry,
};
use bifb::metrics::aggregate_report;
use bifb::pipeline::Method;
use bifb::signal::{PreprocessConfig, WindowPlan};

const AVI: [f64; 7] = [6.0, 6.5, 7.0, 7.5, 8.2, 9.3, 10.0];

/// Writes `per_subject` trials for each subject, cycling through the targets.
fn write_dataset(dir: &Path, subjects: usize, per_subject: usize, duration: f64, fs: f64, snr_db: f64) -> DatasetManifest {
    let mut entries = Vec::new();
    for s in 0..subjects {
        let id = format!("S{}", s + 1);
        std::fs::create_dir_all(dir.join(&id)).unwrap();
        let mut trials = Vec::new();
        for t in 0..per_subject {
            let f = AVI[t % AVI.len()];
            let spec = SynthSpec::clean(f, duration, fs, (s * 1000 + t) as u64).with_snr_db(snr_db);
            let file = format!("{id}/t{t:02}.csv");
            write_trial_csv(&dir.join(&file), &synth_trial(&spec).unwrap()).unwrap();
            trials.push(TrialEntry {
                file,
                stimulus_frequency: f,
                duration,
            });
        }
        entries.push(SubjectEntry { id, trials });
    }
    let manifest = DatasetManifest {
        name: "avi-shaped".into(),
        sampling_rate: fs,
        channels: vec!["Oz".into()],
        targets: AVI.to_vec(),
        subjects: entries,
    };
    manifest.write(&dir.join("manifest.toml")).unwrap();
    manifest
}

#[test]
fn avi_layout_loads_92_trials() {
    let dir = tempfile::tempdir().unwrap();
    let written = write_dataset(dir.path(), 4, 23, 30.0, 64.0, 10.0);
    let ds = load_dataset(&dir.path().join("manifest.toml")).unwrap();
    assert_eq!(ds.subjects.len(), 4);
    assert_eq!(ds.trial_count(), 92);
    assert!(ds.subjects.iter().flat_map(|s| &s.trials).all(|t| t.signal.duration() == 30.0));
    // metadata survives load and re-export unchanged
    let text = ds.manifest.to_toml().unwrap();
    assert_eq!(DatasetManifest::from_toml(&text, Path::new("x")).unwrap(), written);
}

#[test]
fn loaded_trials_decode_and_report() {
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), 1, 14, 12.0, 256.0, 10.0);
    let ds = load_dataset(&dir.path().join("manifest.toml")).unwrap();
    let config = PreprocessConfig::default();
    let plan = WindowPlan::default();
    let methods = [
        Method::Bifb(BifbDetector::new(FilterBank::uniform(&AVI, 0.4, 1.0, 0.5).unwrap(), config.clone())),
        Method::Psda(PsdaDetector::new(PsdaConfig::with_default_tolerance(&AVI).unwrap(), config.clone())),
    ];
    let mut reports = Vec::new();
    for m in &methods {
        let outcomes = m.evaluate(&ds.subjects[0].trials, &plan, &config).unwrap();
        let r = aggregate_report("S1", m.name(), &outcomes, AVI.len()).unwrap();
        assert_eq!(r.accuracy, 1.0, "{}", m.name());
        assert_eq!(r.mdt_seconds, Some(6.0));
        reports.push(r);
    }
    let path = dir.path().join("report.csv");
    export_report(&reports, ReportFormat::Csv, &path).unwrap();
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().starts_with("S1,14,BIFB,6.0,100.0,"));
}

#[test]
fn channel_header_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = write_dataset(dir.path(), 1, 2, 5.0, 64.0, 10.0);
    manifest.channels = vec!["O1".into()];
    manifest.write(&dir.path().join("manifest.toml")).unwrap();
    let err = load_dataset(&dir.path().join("manifest.toml")).unwrap_err().to_string();
    assert!(err.contains("S1 trial 0") && err.contains("channel"), "{err}");
}
