//! Shared trial protocol: preprocess, slide windows, pick a frequency per
//! window and feed the picks to the 3-of-4 decision rule. All three
//! detectors run through the same loop so their detection times are
//! comparable.

use rayon::prelude::*;

use crate::baseline::{CcaDetector, PsdaDetector};
use crate::bifb::{BifbDetector, DecisionState, WindowPick};
use crate::metrics::{self, DetectionResult, TrialOutcome};
use crate::signal::{bandpass, normalize, window_ranges, PreprocessConfig, SampledSignal, WindowPlan};
use crate::{Error, Result};

/// Something that votes for one target per analysis window.
pub trait WindowClassifier: Sync {
    fn pick(&self, window: &SampledSignal, end_time: f64) -> Result<WindowPick>;
}

/// Which channels enter preprocessing.
#[derive(Debug, Clone, Copy)]
pub enum ChannelSelection<'a> {
    One(&'a str),
    Many(&'a [String]),
    All,
}

/// Channel selection, band-pass and per-channel z-score over the full trial.
pub fn preprocess(
    signal: &SampledSignal,
    config: &PreprocessConfig,
    channels: ChannelSelection<'_>,
) -> Result<SampledSignal> {
    config.validate(signal.sampling_rate())?;
    let selected = match channels {
        ChannelSelection::One(label) => signal.select_channel(label)?,
        ChannelSelection::Many(labels) => signal.select_channels(labels)?,
        ChannelSelection::All => signal.clone(),
    };
    let filtered = bandpass(&selected, config.band_low, config.band_high)?;
    Ok(normalize(&filtered))
}

/// Runs the decision rule over an already preprocessed trial. The deadline
/// is the trial duration.
pub fn run_decision(
    prepared: &SampledSignal,
    classifier: &dyn WindowClassifier,
    plan: &WindowPlan,
) -> Result<DetectionResult> {
    let mut state = DecisionState::new(prepared.duration());
    for (end_time, range) in window_ranges(prepared.len(), prepared.sampling_rate(), plan) {
        let window = prepared.slice(range.start, range.end);
        let pick = classifier.pick(&window, end_time)?;
        if let Some(done) = state.update(pick)?.into_result() {
            return Ok(done);
        }
    }
    Ok(DetectionResult::TimedOut)
}

/// A configured detector of any of the three kinds.
#[derive(Debug, Clone)]
pub enum Method {
    Bifb(BifbDetector),
    Psda(PsdaDetector),
    Cca(CcaDetector),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Bifb(_) => "BIFB",
            Method::Psda(_) => "PSDA",
            Method::Cca(_) => "CCA",
        }
    }

    pub fn targets(&self) -> &[f64] {
        match self {
            Method::Bifb(d) => d.bank.targets(),
            Method::Psda(d) => &d.config.targets,
            Method::Cca(d) => &d.targets,
        }
    }

    fn classifier(&self) -> &dyn WindowClassifier {
        match self {
            Method::Bifb(d) => d,
            Method::Psda(d) => d,
            Method::Cca(d) => d,
        }
    }

    fn channels<'a>(&'a self, config: &'a PreprocessConfig) -> ChannelSelection<'a> {
        match self {
            Method::Cca(d) => match &d.channels {
                Some(labels) => ChannelSelection::Many(labels),
                None => ChannelSelection::All,
            },
            _ => ChannelSelection::One(&config.channel),
        }
    }

    /// CCA references reach `harmonic_count` times the highest target, so
    /// its pass band is widened to keep those harmonics in the data.
    fn band_for(&self, config: &PreprocessConfig, sampling_rate: f64) -> PreprocessConfig {
        let mut config = config.clone();
        if let Method::Cca(d) = self {
            let top = d.targets.iter().copied().fold(0.0, f64::max);
            let needed = d.harmonic_count as f64 * top + 2.0;
            config.band_high = config.band_high.max(needed.min(0.45 * sampling_rate));
        }
        config
    }

    /// Full pipeline on a raw trial.
    pub fn detect(
        &self,
        signal: &SampledSignal,
        plan: &WindowPlan,
        config: &PreprocessConfig,
    ) -> Result<DetectionResult> {
        let config = self.band_for(config, signal.sampling_rate());
        let prepared = preprocess(signal, &config, self.channels(&config))?;
        run_decision(&prepared, self.classifier(), plan)
    }

    /// Runs every trial (in parallel) and pairs the results with their labels.
    pub fn evaluate(
        &self,
        trials: &[LabeledTrial],
        plan: &WindowPlan,
        config: &PreprocessConfig,
    ) -> Result<Vec<TrialOutcome>> {
        trials
            .par_iter()
            .map(|t| Ok(TrialOutcome::new(t.frequency, self.detect(&t.signal, plan, config)?)))
            .collect()
    }
}

/// A recording with the stimulus frequency the subject attended.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTrial {
    pub signal: SampledSignal,
    pub frequency: f64,
}

/// Score of one candidate in a training search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub accuracy: f64,
    pub mdt_seconds: Option<f64>,
    pub itr: Option<f64>,
}

impl Fitness {
    pub fn from_outcomes(outcomes: &[TrialOutcome], commands: usize) -> Result<Self> {
        let accuracy = metrics::accuracy(outcomes)?;
        let mdt_seconds = metrics::mean_detection_time(outcomes);
        let itr = match mdt_seconds {
            Some(t) => metrics::itr(commands, accuracy, 60.0 / t)?,
            None => None,
        };
        Ok(Self {
            accuracy,
            mdt_seconds,
            itr,
        })
    }

    /// Higher accuracy first, then higher ITR (absent ranks lowest).
    pub fn beats(&self, other: &Fitness) -> Option<bool> {
        if self.accuracy != other.accuracy {
            return Some(self.accuracy > other.accuracy);
        }
        let a = self.itr.unwrap_or(f64::NEG_INFINITY);
        let b = other.itr.unwrap_or(f64::NEG_INFINITY);
        if a != b {
            return Some(a > b);
        }
        None
    }
}

/// Outcomes of one detector on every trial for every candidate window
/// length. Selection prefers the best accuracy, then ITR, then the shorter
/// window.
pub struct WindowSearch {
    plans: Vec<WindowPlan>,
    outcomes: Vec<Vec<TrialOutcome>>,
    commands: usize,
}

impl WindowSearch {
    pub fn new(
        method: &Method,
        trials: &[LabeledTrial],
        windows: &[f64],
        step_seconds: f64,
        config: &PreprocessConfig,
    ) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::Training("no candidate window lengths".into()));
        }
        if trials.is_empty() {
            return Err(Error::Training("no training trials".into()));
        }
        let mut sorted = windows.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        let plans = sorted
            .into_iter()
            .map(|w| WindowPlan::new(w, step_seconds))
            .collect::<Result<Vec<_>>>()?;
        let outcomes = plans
            .iter()
            .map(|plan| method.evaluate(trials, plan, config))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            plans,
            outcomes,
            commands: method.targets().len(),
        })
    }

    pub fn plans(&self) -> &[WindowPlan] {
        &self.plans
    }

    pub fn trial_count(&self) -> usize {
        self.outcomes.first().map_or(0, Vec::len)
    }

    /// Fitness of every window on the trial subset, in ascending window order.
    pub fn trace(&self, trials: &[usize]) -> Result<Vec<(WindowPlan, Fitness)>> {
        self.plans
            .iter()
            .zip(&self.outcomes)
            .map(|(plan, all)| {
                let subset: Vec<TrialOutcome> = trials.iter().map(|&t| all[t]).collect();
                Ok((*plan, Fitness::from_outcomes(&subset, self.commands)?))
            })
            .collect()
    }

    /// Index of the selected window on the trial subset.
    pub fn best(&self, trials: &[usize]) -> Result<usize> {
        let trace = self.trace(trials)?;
        let mut best = 0;
        for (i, (_, fit)) in trace.iter().enumerate().skip(1) {
            if fit.beats(&trace[best].1) == Some(true) {
                best = i;
            }
        }
        Ok(best)
    }

    /// Each trial decoded with the window selected on all other trials.
    pub fn leave_one_out(&self) -> Result<Vec<TrialOutcome>> {
        let n = self.trial_count();
        (0..n)
            .map(|held| {
                let rest: Vec<usize> = (0..n).filter(|&i| i != held).collect();
                Ok(self.outcomes[self.best(&rest)?][held])
            })
            .collect()
    }
}

/// Window-length search for detectors whose only trained parameter is the
/// window. Returns the selected plan and the fitness of every candidate.
pub fn select_window(
    method: &Method,
    trials: &[LabeledTrial],
    windows: &[f64],
    step_seconds: f64,
    config: &PreprocessConfig,
) -> Result<(WindowPlan, Vec<(WindowPlan, Fitness)>)> {
    let search = WindowSearch::new(method, trials, windows, step_seconds, config)?;
    let all: Vec<usize> = (0..search.trial_count()).collect();
    let best = search.best(&all)?;
    Ok((search.plans[best], search.trace(&all)?))
}
