//! Loads the bundled sample dataset, decodes it with PSDA and writes the
//! report next to a copy of the manifest in a temporary directory.

use std::path::Path;

use bifb::baseline::{PsdaConfig, PsdaDetector};
use bifb::io::{export_report, load_dataset, DatasetManifest, ReportFormat};
use bifb::metrics::aggregate_report;
use bifb::pipeline::Method;
use bifb::signal::{PreprocessConfig, WindowPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample/manifest.toml");
    let dataset = load_dataset(&manifest)?;
    println!(
        "{}: {} subject(s), {} trials, {} Hz, channels {:?}",
        dataset.manifest.name,
        dataset.subjects.len(),
        dataset.trial_count(),
        dataset.manifest.sampling_rate,
        dataset.manifest.channels
    );

    let targets = &dataset.manifest.targets;
    let config = PreprocessConfig::default();
    let method = Method::Psda(PsdaDetector::new(PsdaConfig::with_default_tolerance(targets)?, config.clone()));
    let mut reports = Vec::new();
    for subject in &dataset.subjects {
        let outcomes = method.evaluate(&subject.trials, &WindowPlan::default(), &config)?;
        reports.push(aggregate_report(&subject.id, method.name(), &outcomes, targets.len())?);
    }

    let out = std::env::temp_dir().join("bifb-dataset-roundtrip");
    std::fs::create_dir_all(&out)?;
    dataset.manifest.write(&out.join("manifest.toml"))?;
    let copy = DatasetManifest::read(&out.join("manifest.toml"))?;
    println!("manifest round trip lossless: {}", copy == dataset.manifest);
    export_report(&reports, ReportFormat::Csv, &out.join("report.csv"))?;
    print!("{}", std::fs::read_to_string(out.join("report.csv"))?);
    Ok(())
}
