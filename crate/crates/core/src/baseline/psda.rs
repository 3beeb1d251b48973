use crate::bifb::WindowPick;
use crate::pipeline::WindowClassifier;
use crate::signal::{magnitude_spectrum, PreprocessConfig, SampledSignal, Spectrum};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PsdaConfig {
    pub targets: Vec<f64>,
    /// Maximum distance in Hz between the spectral peak and a target (or its
    /// second harmonic) for the peak to count as that target.
    pub match_tolerance: f64,
}

impl PsdaConfig {
    pub fn new(targets: &[f64], match_tolerance: f64) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidConfig("PSDA needs at least one target".into()));
        }
        let gap = min_gap(targets);
        if !(match_tolerance > 0.0 && match_tolerance < gap / 2.0) {
            return Err(Error::InvalidConfig(format!(
                "match tolerance {match_tolerance} Hz must lie in (0, {}) Hz, half the smallest \
                 gap between targets and their second harmonics",
                gap / 2.0
            )));
        }
        Ok(Self {
            targets: targets.to_vec(),
            match_tolerance,
        })
    }

    /// Tolerance of 0.25 Hz, shrunk to 45% of the smallest gap when targets are denser.
    pub fn with_default_tolerance(targets: &[f64]) -> Result<Self> {
        let tol = (0.45 * min_gap(targets)).min(0.25);
        Self::new(targets, tol)
    }
}

/// Smallest distance between distinct points among the targets and their
/// doubles. Coinciding points (e.g. 28 Hz = 2 x 14 Hz) are not a gap: the
/// fundamental reading wins there.
fn min_gap(targets: &[f64]) -> f64 {
    let mut points: Vec<f64> = targets.iter().flat_map(|f| [*f, 2.0 * f]).collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    points
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Maps the global spectral peak to a target: a peak near `f_k` or `2 f_k`
/// votes for `f_k`, anything else votes for the nearest fundamental.
pub fn psda_pick(spectrum: &Spectrum, config: &PsdaConfig, end_time: f64) -> Result<WindowPick> {
    let (_, peak) = spectrum.peak().ok_or(Error::EmptySpectrum)?;
    let pick = |frequency| WindowPick { frequency, end_time };
    let tol = config.match_tolerance;
    if let Some(f) = config.targets.iter().find(|f| (peak - **f).abs() <= tol) {
        return Ok(pick(*f));
    }
    if let Some(f) = config.targets.iter().find(|f| (peak - 2.0 * **f).abs() <= tol) {
        return Ok(pick(*f));
    }
    let mut nearest = config.targets[0];
    for f in &config.targets[1..] {
        if (peak - f).abs() < (peak - nearest).abs() {
            nearest = *f;
        }
    }
    Ok(pick(nearest))
}

/// PSDA over the analysis band of the selected channel's window spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdaDetector {
    pub config: PsdaConfig,
    pub preprocess: PreprocessConfig,
}

impl PsdaDetector {
    pub fn new(config: PsdaConfig, preprocess: PreprocessConfig) -> Self {
        Self { config, preprocess }
    }
}

impl WindowClassifier for PsdaDetector {
    fn pick(&self, window: &SampledSignal, end_time: f64) -> Result<WindowPick> {
        let spectrum = magnitude_spectrum(window, &self.preprocess)?
            .restrict(self.preprocess.band_low, self.preprocess.band_high);
        psda_pick(&spectrum, &self.config, end_time)
    }
}
