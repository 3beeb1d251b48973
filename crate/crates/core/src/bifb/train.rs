use rayon::prelude::*;

use super::{class_scores, pick_frequency, DecisionState, FilterBank};
use crate::metrics::{DetectionResult, TrialOutcome};
use crate::pipeline::{preprocess, ChannelSelection, Fitness, LabeledTrial};
use crate::signal::{magnitude_spectrum, window_ranges, PreprocessConfig, Spectrum, WindowPlan};
use crate::{Error, Result};

/// Candidate values for the exhaustive search.
///
/// Bandwidth is shared by all targets. `gains` holds the gain of the highest
/// target relative to the lowest, which is fixed at 1; targets in between are
/// interpolated linearly in frequency (see [`gain_profile`]). Values >= 1
/// give the weaker high-frequency responses more weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingGrid {
    pub bandwidths: Vec<f64>,
    pub gains: Vec<f64>,
    pub harmonic_weights: Vec<f64>,
    pub window_seconds: Vec<f64>,
    pub step_seconds: f64,
}

impl Default for TrainingGrid {
    fn default() -> Self {
        Self {
            bandwidths: vec![0.2, 0.4, 0.6, 1.0],
            gains: vec![1.0, 1.5, 2.0, 3.0],
            harmonic_weights: vec![0.0, 0.25, 0.5, 1.0],
            window_seconds: vec![2.0, 3.0, 4.0, 5.0, 6.0],
            step_seconds: 1.0,
        }
    }
}

impl TrainingGrid {
    pub fn single(candidate: Candidate, step_seconds: f64) -> Self {
        Self {
            bandwidths: vec![candidate.bandwidth],
            gains: vec![candidate.gain],
            harmonic_weights: vec![candidate.harmonic_weight],
            window_seconds: vec![candidate.window_seconds],
            step_seconds,
        }
    }

    pub fn size(&self) -> usize {
        self.bandwidths.len() * self.gains.len() * self.harmonic_weights.len() * self.window_seconds.len()
    }

    fn validate(&self) -> Result<()> {
        let dims = [
            ("bandwidths", &self.bandwidths),
            ("gains", &self.gains),
            ("window lengths", &self.window_seconds),
        ];
        for (name, values) in dims {
            if values.is_empty() {
                return Err(Error::Training(format!("empty grid: no {name}")));
            }
            if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::Training(format!("{name} must be positive")));
            }
        }
        if self.harmonic_weights.is_empty() {
            return Err(Error::Training("empty grid: no harmonic weights".into()));
        }
        if self.harmonic_weights.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Training("harmonic weights must be >= 0".into()));
        }
        if let Some(w) = self.window_seconds.iter().find(|w| **w < self.step_seconds) {
            return Err(Error::Training(format!(
                "window {w} s is shorter than the {} s step",
                self.step_seconds
            )));
        }
        Ok(())
    }

    fn sorted(values: &[f64]) -> Vec<f64> {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Candidates in tie-break order: window, bandwidth, gain, harmonic weight.
    fn candidates(&self) -> Vec<Candidate> {
        let mut out = Vec::with_capacity(self.size());
        for &window_seconds in &Self::sorted(&self.window_seconds) {
            for &bandwidth in &Self::sorted(&self.bandwidths) {
                for &gain in &Self::sorted(&self.gains) {
                    for &harmonic_weight in &Self::sorted(&self.harmonic_weights) {
                        out.push(Candidate {
                            window_seconds,
                            bandwidth,
                            gain,
                            harmonic_weight,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Per-target gains rising linearly in frequency from 1 at the lowest target
/// to `top_gain` at the highest.
pub fn gain_profile(targets: &[f64], top_gain: f64) -> Vec<f64> {
    let lo = targets.first().copied().unwrap_or(0.0);
    let hi = targets.last().copied().unwrap_or(0.0);
    let span = hi - lo;
    targets
        .iter()
        .map(|f| {
            let x = if span > 0.0 { (f - lo) / span } else { 0.0 };
            1.0 + (top_gain - 1.0) * x
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub window_seconds: f64,
    pub bandwidth: f64,
    pub gain: f64,
    pub harmonic_weight: f64,
}

impl Candidate {
    pub fn bank(&self, targets: &[f64]) -> Result<FilterBank> {
        let bandwidths = vec![self.bandwidth; targets.len()];
        FilterBank::new(targets, &bandwidths, &gain_profile(targets, self.gain), self.harmonic_weight)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub candidate: Candidate,
    pub fitness: Fitness,
}

#[derive(Debug, Clone)]
pub struct TrainedBank {
    pub bank: FilterBank,
    pub plan: WindowPlan,
    pub best: GridPoint,
    /// Every valid candidate in search order.
    pub trace: Vec<GridPoint>,
}

struct CachedTrial {
    label: f64,
    deadline: f64,
    /// End time and restricted spectrum of every window.
    windows: Vec<(f64, Spectrum)>,
}

/// Exhaustive grid search with the window spectra of every training trial
/// computed once per candidate window length.
pub struct Trainer {
    targets: Vec<f64>,
    grid: TrainingGrid,
    /// Indexed like the sorted, deduplicated window lengths.
    windows: Vec<f64>,
    cache: Vec<Vec<CachedTrial>>,
}

impl Trainer {
    pub fn new(
        trials: &[LabeledTrial],
        targets: &[f64],
        grid: TrainingGrid,
        config: &PreprocessConfig,
    ) -> Result<Self> {
        grid.validate()?;
        if targets.len() < 2 {
            return Err(Error::Training("at least two target frequencies are required".into()));
        }
        for t in trials {
            if !targets.iter().any(|f| (f - t.frequency).abs() < 1e-9) {
                return Err(Error::Training(format!(
                    "trial labelled {} Hz is not a target",
                    t.frequency
                )));
            }
        }
        for f in targets {
            if !trials.iter().any(|t| (f - t.frequency).abs() < 1e-9) {
                return Err(Error::Training(format!("no training trial for target {f} Hz")));
            }
        }

        let max_bw = grid.bandwidths.iter().copied().fold(0.0, f64::max);
        let lo = targets[0] - max_bw / 2.0;
        let hi = 2.0 * targets[targets.len() - 1] + max_bw / 2.0;

        let prepared: Vec<_> = trials
            .par_iter()
            .map(|t| preprocess(&t.signal, config, ChannelSelection::One(&config.channel)))
            .collect::<Result<_>>()?;
        if let Some(p) = prepared.iter().find(|p| hi >= p.sampling_rate() / 2.0) {
            return Err(Error::InsufficientCoverage {
                low: lo,
                high: hi,
                first: 0.0,
                last: p.sampling_rate() / 2.0,
            });
        }

        let windows = TrainingGrid::sorted(&grid.window_seconds);
        let cache = windows
            .iter()
            .map(|&w| {
                let plan = WindowPlan::new(w, grid.step_seconds)?;
                prepared
                    .par_iter()
                    .zip(trials)
                    .map(|(p, t)| {
                        let spectra = window_ranges(p.len(), p.sampling_rate(), &plan)
                            .into_iter()
                            .map(|(end, r)| {
                                let spec = magnitude_spectrum(&p.slice(r.start, r.end), config)?;
                                let margin = 2.0 * spec.spacing();
                                Ok((end, spec.restrict(lo - margin, hi + margin)))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(CachedTrial {
                            label: t.frequency,
                            deadline: p.duration(),
                            windows: spectra,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            targets: targets.to_vec(),
            grid,
            windows,
            cache,
        })
    }

    pub fn trial_count(&self) -> usize {
        self.cache.first().map_or(0, Vec::len)
    }

    fn outcome(&self, bank: &FilterBank, window_index: usize, trial: usize) -> Result<TrialOutcome> {
        let cached = &self.cache[window_index][trial];
        let mut state = DecisionState::new(cached.deadline);
        for (end, spectrum) in &cached.windows {
            let pick = pick_frequency(&class_scores(spectrum, bank, *end)?)?;
            if let Some(done) = state.update(pick)?.into_result() {
                return Ok(TrialOutcome::new(cached.label, done));
            }
        }
        Ok(TrialOutcome::new(cached.label, DetectionResult::TimedOut))
    }

    fn window_index(&self, window_seconds: f64) -> Result<usize> {
        self.windows
            .iter()
            .position(|w| *w == window_seconds)
            .ok_or_else(|| Error::Training(format!("window {window_seconds} s is not in the grid")))
    }

    /// Outcomes of one candidate on the given trials.
    pub fn evaluate(&self, candidate: &Candidate, trials: &[usize]) -> Result<Vec<TrialOutcome>> {
        let bank = candidate.bank(&self.targets)?;
        let wi = self.window_index(candidate.window_seconds)?;
        trials.iter().map(|&t| self.outcome(&bank, wi, t)).collect()
    }

    /// Best candidate on the given trial subset: highest accuracy, then
    /// highest ITR, then shortest window, then smallest bandwidth, gain and
    /// harmonic weight. Candidates whose bank is invalid for the target set
    /// are skipped.
    pub fn search(&self, trials: &[usize]) -> Result<TrainedBank> {
        if trials.is_empty() {
            return Err(Error::Training("no training trials".into()));
        }
        let commands = self.targets.len();
        let trace: Vec<GridPoint> = self
            .grid
            .candidates()
            .into_par_iter()
            .filter_map(|candidate| {
                let bank = candidate.bank(&self.targets).ok()?;
                Some((candidate, bank))
            })
            .map(|(candidate, bank)| {
                let wi = self.window_index(candidate.window_seconds)?;
                let outcomes = trials
                    .iter()
                    .map(|&t| self.outcome(&bank, wi, t))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GridPoint {
                    candidate,
                    fitness: Fitness::from_outcomes(&outcomes, commands)?,
                })
            })
            .collect::<Result<_>>()?;

        let mut best: Option<&GridPoint> = None;
        for point in &trace {
            if best.is_none_or(|b| point.fitness.beats(&b.fitness) == Some(true)) {
                best = Some(point);
            }
        }
        let best = *best.ok_or_else(|| {
            Error::Training("no grid candidate yields a valid filter bank for these targets".into())
        })?;
        Ok(TrainedBank {
            bank: best.candidate.bank(&self.targets)?,
            plan: WindowPlan::new(best.candidate.window_seconds, self.grid.step_seconds)?,
            best,
            trace,
        })
    }

    pub fn search_all(&self) -> Result<TrainedBank> {
        let all: Vec<usize> = (0..self.trial_count()).collect();
        self.search(&all)
    }

    /// Leave-one-trial-out: each trial is decoded with the configuration
    /// trained on all the others.
    pub fn leave_one_out(&self) -> Result<Vec<TrialOutcome>> {
        let n = self.trial_count();
        (0..n)
            .map(|held| {
                let rest: Vec<usize> = (0..n).filter(|&i| i != held).collect();
                let trained = self.search(&rest)?;
                let wi = self.window_index(trained.best.candidate.window_seconds)?;
                self.outcome(&trained.bank, wi, held)
            })
            .collect()
    }
}

/// Exhaustive search over `grid` using all `trials`.
pub fn train_filter_bank(
    trials: &[LabeledTrial],
    targets: &[f64],
    grid: &TrainingGrid,
    config: &PreprocessConfig,
) -> Result<TrainedBank> {
    Trainer::new(trials, targets, grid.clone(), config)?.search_all()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::synth::{synth_trial, SynthSpec};

    fn corpus(targets: &[f64], per_target: usize) -> Vec<LabeledTrial> {
        let mut out = Vec::new();
        for (k, &f) in targets.iter().enumerate() {
            for i in 0..per_target {
                let mut spec = SynthSpec::clean(f, 10.0, 256.0, (k * 100 + i) as u64);
                spec.noise_std = 0.3;
                out.push(LabeledTrial {
                    signal: synth_trial(&spec).unwrap(),
                    frequency: f,
                });
            }
        }
        out
    }

    #[test]
    fn gain_profile_is_monotone() {
        let g = gain_profile(&[8.0, 14.0, 28.0], 3.0);
        assert_eq!(g[0], 1.0);
        assert!((g[1] - 1.6).abs() < 1e-12);
        assert_eq!(g[2], 3.0);
    }

    #[test]
    fn degenerate_grid_returns_sole_candidate() {
        let targets = [8.0, 14.0, 28.0];
        let cand = Candidate {
            window_seconds: 3.0,
            bandwidth: 0.6,
            gain: 1.5,
            harmonic_weight: 0.25,
        };
        let trained = train_filter_bank(
            &corpus(&targets, 1),
            &targets,
            &TrainingGrid::single(cand, 1.0),
            &PreprocessConfig::default(),
        )
        .unwrap();
        assert_eq!(trained.best.candidate, cand);
        assert_eq!(trained.plan, WindowPlan::new(3.0, 1.0).unwrap());
        assert_eq!(trained.bank, cand.bank(&targets).unwrap());
        assert_eq!(trained.trace.len(), 1);
    }

    #[test]
    fn equal_fitness_prefers_shorter_window() {
        let targets = [8.0, 14.0, 28.0];
        let grid = TrainingGrid {
            bandwidths: vec![0.6],
            gains: vec![1.0],
            harmonic_weights: vec![0.5],
            window_seconds: vec![4.0, 3.0],
            step_seconds: 1.0,
        };
        let trained = train_filter_bank(&corpus(&targets, 1), &targets, &grid, &PreprocessConfig::default()).unwrap();
        assert_eq!(trained.trace.len(), 2);
        // both windows detect every clean trial, the shorter one sooner
        assert_eq!(trained.trace[0].fitness.accuracy, 1.0);
        assert_eq!(trained.trace[1].fitness.accuracy, 1.0);
        assert_eq!(trained.plan.window_seconds, 3.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let targets = [8.0, 14.0, 28.0];
        let trials = corpus(&[8.0, 14.0], 1);
        let err = train_filter_bank(&trials, &targets, &TrainingGrid::default(), &PreprocessConfig::default());
        assert!(matches!(err, Err(Error::Training(m)) if m.contains("28")));
        let mut grid = TrainingGrid::default();
        grid.gains.clear();
        let err = train_filter_bank(&corpus(&targets, 1), &targets, &grid, &PreprocessConfig::default());
        assert!(matches!(err, Err(Error::Training(m)) if m.contains("empty grid")));
    }

    #[test]
    fn invalid_banks_are_skipped() {
        let targets = [6.0, 6.5, 7.0];
        let grid = TrainingGrid {
            bandwidths: vec![0.4, 2.4],
            gains: vec![1.0],
            harmonic_weights: vec![0.0],
            window_seconds: vec![4.0],
            step_seconds: 1.0,
        };
        let trained = train_filter_bank(&corpus(&targets, 1), &targets, &grid, &PreprocessConfig::default()).unwrap();
        assert_eq!(trained.trace.len(), 1);
        assert_eq!(trained.best.candidate.bandwidth, 0.4);
    }
}
