//! Runs the filter-bank detector, PSDA and CCA over the same seeded
//! synthetic corpus and prints the comparison table. The optional argument
//! is the per-harmonic SNR in dB (default -22).

use bifb::baseline::{CcaDetector, PsdaConfig, PsdaDetector};
use bifb::bifb::{BifbDetector, FilterBank};
use bifb::io::{render_text, synth_corpus, SynthSpec};
use bifb::metrics::aggregate_report;
use bifb::pipeline::Method;
use bifb::signal::{PreprocessConfig, WindowPlan};

fn main() -> bifb::Result<()> {
    let targets = [6.0, 6.5, 7.0, 7.5, 8.2, 9.3, 10.0];
    let snr_db: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(-22.0);
    let template = SynthSpec::clean(targets[0], 30.0, 256.0, 0).with_snr_db(snr_db);
    let corpus = synth_corpus(&targets, 10, &template, 99)?;
    let config = PreprocessConfig::default();
    let plan = WindowPlan::default();

    let methods = [
        Method::Psda(PsdaDetector::new(PsdaConfig::with_default_tolerance(&targets)?, config.clone())),
        Method::Cca(CcaDetector::new(&targets)),
        Method::Bifb(BifbDetector::new(FilterBank::uniform(&targets, 0.4, 1.0, 0.5)?, config.clone())),
    ];
    let mut reports = Vec::new();
    for method in &methods {
        let outcomes = method.evaluate(&corpus, &plan, &config)?;
        reports.push(aggregate_report("synthetic", method.name(), &outcomes, targets.len())?);
    }
    println!("per-harmonic SNR {snr_db} dB, {} trials", corpus.len());
    print!("{}", render_text(&reports)?);
    Ok(())
}
