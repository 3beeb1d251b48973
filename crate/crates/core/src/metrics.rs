//! Accuracy, mean detection time and information transfer rate.

use crate::{Error, Result};

/// Result of running the temporal decision rule over one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectionResult {
    Detected { frequency: f64, time: f64 },
    TimedOut,
}

impl DetectionResult {
    pub fn detection_time(&self) -> Option<f64> {
        match self {
            DetectionResult::Detected { time, .. } => Some(*time),
            DetectionResult::TimedOut => None,
        }
    }

    pub fn frequency(&self) -> Option<f64> {
        match self {
            DetectionResult::Detected { frequency, .. } => Some(*frequency),
            DetectionResult::TimedOut => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub true_frequency: f64,
    pub result: DetectionResult,
}

impl TrialOutcome {
    pub fn new(true_frequency: f64, result: DetectionResult) -> Self {
        Self {
            true_frequency,
            result,
        }
    }

    pub fn is_correct(&self) -> bool {
        self.result
            .frequency()
            .is_some_and(|f| (f - self.true_frequency).abs() < 1e-9)
    }
}

/// Fraction of trials detected at their true frequency. Timeouts count as errors.
pub fn accuracy(outcomes: &[TrialOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::NoOutcomes);
    }
    let correct = outcomes.iter().filter(|o| o.is_correct()).count();
    Ok(correct as f64 / outcomes.len() as f64)
}

/// Mean time of every fired detection, correct or not. `None` when nothing fired.
pub fn mean_detection_time(outcomes: &[TrialOutcome]) -> Option<f64> {
    let times: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| o.result.detection_time())
        .collect();
    if times.is_empty() {
        None
    } else {
        Some(times.iter().sum::<f64>() / times.len() as f64)
    }
}

/// Wolpaw information transfer rate in bits per minute.
///
/// `commands` is the number of equiprobable choices, `p` the probability of a
/// correct detection and `per_minute` the number of commands issued per
/// minute. Returns `None` for below-chance accuracy (`p < 1/N`), where the
/// rate is not meaningful.
pub fn itr(commands: usize, p: f64, per_minute: f64) -> Result<Option<f64>> {
    if commands < 2 {
        return Err(Error::TooFewCommands(commands));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("accuracy {p} outside [0, 1]")));
    }
    if !(per_minute.is_finite() && per_minute > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "command rate must be positive, got {per_minute}"
        )));
    }
    let n = commands as f64;
    if p < 1.0 / n {
        return Ok(None);
    }
    let hit = if p > 0.0 { p * p.log2() } else { 0.0 };
    let miss = if p < 1.0 {
        (1.0 - p) * ((1.0 - p) / (n - 1.0)).log2()
    } else {
        0.0
    };
    let bits = n.log2() + hit + miss;
    if bits < 0.0 {
        // only rounding noise around p = 1/N can get here
        return Ok(Some(0.0));
    }
    Ok(Some(per_minute * bits))
}

/// One row of a method comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectReport {
    pub subject: String,
    pub method: String,
    pub trial_count: usize,
    pub mdt_seconds: Option<f64>,
    pub accuracy: f64,
    pub commands_per_minute: Option<f64>,
    pub itr_bits_per_minute: Option<f64>,
    pub command_count: usize,
}

/// Accuracy, MDT, `s = 60 / MDT` and ITR for one subject's outcomes.
pub fn aggregate_report(
    subject: &str,
    method: &str,
    outcomes: &[TrialOutcome],
    commands: usize,
) -> Result<SubjectReport> {
    let accuracy = accuracy(outcomes)?;
    let mdt = mean_detection_time(outcomes);
    let per_minute = mdt.map(|t| 60.0 / t);
    let itr = match per_minute {
        Some(s) => itr(commands, accuracy, s)?,
        None => {
            if commands < 2 {
                return Err(Error::TooFewCommands(commands));
            }
            None
        }
    };
    Ok(SubjectReport {
        subject: subject.to_string(),
        method: method.to_string(),
        trial_count: outcomes.len(),
        mdt_seconds: mdt,
        accuracy,
        commands_per_minute: per_minute,
        itr_bits_per_minute: itr,
        command_count: commands,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hit(f: f64, t: f64) -> TrialOutcome {
        TrialOutcome::new(f, DetectionResult::Detected { frequency: f, time: t })
    }

    fn miss(f: f64, t: f64) -> TrialOutcome {
        TrialOutcome::new(f, DetectionResult::Detected { frequency: f + 1.0, time: t })
    }

    fn timeout(f: f64) -> TrialOutcome {
        TrialOutcome::new(f, DetectionResult::TimedOut)
    }

    #[test]
    fn accuracy_examples() {
        let o = [hit(6.0, 6.0), hit(7.0, 6.0), hit(8.0, 6.0), miss(6.0, 6.0)];
        assert_eq!(accuracy(&o).unwrap(), 0.75);
        assert_eq!(accuracy(&[timeout(6.0), timeout(7.0)]).unwrap(), 0.0);
        let mut o: Vec<_> = (0..22).map(|_| hit(6.0, 7.0)).collect();
        o.extend([miss(6.0, 7.0), timeout(6.0)]);
        assert!((accuracy(&o).unwrap() - 0.9167).abs() < 5e-5);
        assert!(matches!(accuracy(&[]), Err(Error::NoOutcomes)));
    }

    #[test]
    fn mdt_examples() {
        assert_eq!(mean_detection_time(&[hit(6.0, 6.0), miss(6.0, 7.0), hit(6.0, 8.0)]), Some(7.0));
        assert_eq!(mean_detection_time(&[hit(6.0, 6.0), timeout(6.0)]), Some(6.0));
        assert_eq!(mean_detection_time(&[timeout(6.0)]), None);
    }

    #[test]
    fn itr_examples() {
        let v = itr(7, 0.875, 60.0 / 5.5).unwrap().unwrap();
        assert!((v - 21.2).abs() <= 0.1, "{v}");
        let v = itr(3, 0.867, 6.0).unwrap().unwrap();
        assert!((v - 5.32).abs() <= 0.01, "{v}");
        assert!(itr(2, 0.5, 17.0).unwrap().unwrap().abs() < 1e-12);
        assert_eq!(itr(3, 0.067, 4.0).unwrap(), None);
        assert!(matches!(itr(1, 1.0, 1.0), Err(Error::TooFewCommands(1))));
        assert!(itr(3, 1.5, 1.0).is_err());
        assert!(itr(3, 0.5, 0.0).is_err());
    }

    #[test]
    fn report_examples() {
        let outcomes: Vec<_> = (0..21).map(|_| hit(8.0, 6.3)).collect();
        let r = aggregate_report("Subject4", "BIFB", &outcomes, 7).unwrap();
        assert!((r.itr_bits_per_minute.unwrap() - 26.6).abs() <= 0.3);
        assert!((r.itr_bits_per_minute.unwrap() - 26.74).abs() <= 0.01);

        let outcomes: Vec<_> = (0..15).map(|_| hit(8.0, 7.5)).collect();
        let r = aggregate_report("Subject1", "BIFB", &outcomes, 3).unwrap();
        assert!((r.itr_bits_per_minute.unwrap() - 12.68).abs() <= 0.01);

        let r = aggregate_report("S", "CCA", &[timeout(8.0), timeout(14.0)], 3).unwrap();
        assert_eq!(r.accuracy, 0.0);
        assert_eq!(r.mdt_seconds, None);
        assert_eq!(r.commands_per_minute, None);
        assert_eq!(r.itr_bits_per_minute, None);
    }

    proptest! {
        #[test]
        fn itr_monotone_above_chance(n in 2usize..40, s in 0.1f64..60.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let chance = 1.0 / n as f64;
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let lo = chance + lo * (1.0 - chance);
            let hi = chance + hi * (1.0 - chance);
            let x = itr(n, lo, s).unwrap().unwrap();
            let y = itr(n, hi, s).unwrap().unwrap();
            prop_assert!(y >= x - 1e-9);
        }

        #[test]
        fn itr_limits_and_scaling(n in 2usize..40, s in 0.1f64..60.0, p in 0.0f64..1.0) {
            let full = itr(n, 1.0, s).unwrap().unwrap();
            prop_assert_eq!(full, s * (n as f64).log2());
            let chance = itr(n, 1.0 / n as f64, s).unwrap().unwrap();
            prop_assert!(chance.abs() < 1e-9);
            let p = 1.0 / n as f64 + p * (1.0 - 1.0 / n as f64);
            let one = itr(n, p, s).unwrap().unwrap();
            let two = itr(n, p, 2.0 * s).unwrap().unwrap();
            prop_assert!((two - 2.0 * one).abs() <= 1e-9 * two.abs().max(1.0));
        }
    }
}
