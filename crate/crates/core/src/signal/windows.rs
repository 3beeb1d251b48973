use std::ops::Range;

use super::{SampledSignal, WindowPlan};

/// One analysis window and the time (seconds from trial start) at which it ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub end_time: f64,
    pub signal: SampledSignal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Windows {
    pub windows: Vec<Window>,
    /// Set when the signal is shorter than a single window.
    pub too_short: bool,
}

/// Sample ranges and end times of every full window. Partial trailing
/// windows are dropped.
pub fn window_ranges(len: usize, sampling_rate: f64, plan: &WindowPlan) -> Vec<(f64, Range<usize>)> {
    let width = plan.window_samples(sampling_rate);
    let hop = plan.step_samples(sampling_rate);
    if width == 0 || len < width {
        return Vec::new();
    }
    let count = (len - width) / hop + 1;
    (0..count)
        .map(|i| {
            let start = i * hop;
            let end_time = plan.window_seconds + i as f64 * plan.step_seconds;
            (end_time, start..start + width)
        })
        .collect()
}

pub fn sliding_windows(signal: &SampledSignal, plan: &WindowPlan) -> Windows {
    let ranges = window_ranges(signal.len(), signal.sampling_rate(), plan);
    Windows {
        too_short: ranges.is_empty(),
        windows: ranges
            .into_iter()
            .map(|(end_time, r)| Window {
                end_time,
                signal: signal.slice(r.start, r.end),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(secs: f64) -> SampledSignal {
        let n = (secs * 128.0) as usize;
        SampledSignal::single("Oz", (0..n).map(|i| i as f64).collect(), 128.0).unwrap()
    }

    #[test]
    fn thirty_second_trial() {
        let w = sliding_windows(&trial(30.0), &WindowPlan::default());
        assert!(!w.too_short);
        assert_eq!(w.windows.len(), 27);
        let ends: Vec<f64> = w.windows.iter().map(|w| w.end_time).collect();
        assert_eq!(ends, (4..=30).map(f64::from).collect::<Vec<_>>());
        assert_eq!(w.windows[1].signal.channel(0)[0], 128.0);
        assert_eq!(w.windows[1].signal.len(), 512);
    }

    #[test]
    fn fifteen_second_trial() {
        assert_eq!(sliding_windows(&trial(15.0), &WindowPlan::default()).windows.len(), 12);
    }

    #[test]
    fn short_trial_sets_flag() {
        let w = sliding_windows(&trial(3.0), &WindowPlan::default());
        assert!(w.too_short);
        assert!(w.windows.is_empty());
    }

    #[test]
    fn partial_tail_dropped_and_rerun_identical() {
        let s = trial(10.5);
        let a = sliding_windows(&s, &WindowPlan::default());
        assert_eq!(a.windows.last().unwrap().end_time, 10.0);
        assert_eq!(a, sliding_windows(&s, &WindowPlan::default()));
    }
}
