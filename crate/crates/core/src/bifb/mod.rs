//! Triangular filter-bank detector.
//!
//! Each stimulus frequency gets a triangular filter on the magnitude
//! spectrum plus a second triangle at twice the frequency weighted by a
//! shared harmonic weight. The per-window class value is the filtered
//! spectral sum, the window votes for the largest class, and a frequency is
//! detected once it wins three of the last four windows.

mod decision;
mod filter;
mod score;
mod train;

pub use decision::{update_decision, DecisionState, DecisionStatus};
pub use filter::{FilterBank, TriangularFilter};
pub use score::{class_scores, pick_frequency, ClassScores, WindowPick};
pub use train::{
    gain_profile, train_filter_bank, Candidate, GridPoint, TrainedBank, Trainer, TrainingGrid,
};

use crate::metrics::DetectionResult;
use crate::pipeline::{Method, WindowClassifier};
use crate::signal::{magnitude_spectrum, PreprocessConfig, SampledSignal, WindowPlan};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct BifbDetector {
    pub bank: FilterBank,
    pub config: PreprocessConfig,
}

impl BifbDetector {
    pub fn new(bank: FilterBank, config: PreprocessConfig) -> Self {
        Self { bank, config }
    }
}

impl WindowClassifier for BifbDetector {
    fn pick(&self, window: &SampledSignal, end_time: f64) -> Result<WindowPick> {
        let spectrum = magnitude_spectrum(window, &self.config)?;
        pick_frequency(&class_scores(&spectrum, &self.bank, end_time)?)
    }
}

/// Band-pass, normalize, window, score and vote over one trial.
pub fn detect_trial(
    signal: &SampledSignal,
    bank: &FilterBank,
    plan: &WindowPlan,
    config: &PreprocessConfig,
) -> Result<DetectionResult> {
    Method::Bifb(BifbDetector::new(bank.clone(), config.clone())).detect(signal, plan, config)
}
