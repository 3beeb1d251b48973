use super::{FilterBank, TriangularFilter};
use crate::signal::Spectrum;
use crate::{Error, Result};

/// Per-target class values for one window.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassScores {
    pub end_time: f64,
    pub targets: Vec<f64>,
    pub scores: Vec<f64>,
}

/// Frequency chosen for one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowPick {
    pub frequency: f64,
    pub end_time: f64,
}

/// `c_k = sum |Y| H_k + w_h * sum |Y| H_2k` over the spectrum bins.
pub fn class_scores(spectrum: &Spectrum, bank: &FilterBank, end_time: f64) -> Result<ClassScores> {
    let (low, high) = bank.coverage();
    let (first, last) = (spectrum.first_frequency(), spectrum.last_frequency());
    let slack = 1e-9 * spectrum.spacing();
    if spectrum.is_empty() || low < first - slack || high > last + slack {
        return Err(Error::InsufficientCoverage {
            low,
            high,
            first,
            last,
        });
    }
    let scores = bank
        .fundamentals()
        .iter()
        .zip(bank.harmonics())
        .map(|(fundamental, harmonic)| {
            filtered_sum(spectrum, fundamental) + bank.harmonic_weight() * filtered_sum(spectrum, harmonic)
        })
        .collect();
    Ok(ClassScores {
        end_time,
        targets: bank.targets().to_vec(),
        scores,
    })
}

fn filtered_sum(spectrum: &Spectrum, filter: &TriangularFilter) -> f64 {
    let (low, high) = filter.support();
    let first = spectrum.first_frequency();
    let step = spectrum.spacing();
    let mags = spectrum.magnitudes();
    let start = (((low - first) / step).floor() as isize - 1).max(0) as usize;
    let end = ((((high - first) / step).ceil() as isize) + 2).max(0) as usize;
    let end = end.min(mags.len());
    (start.min(end)..end)
        .map(|i| mags[i] * filter.response(spectrum.frequency(i)))
        .sum()
}

/// Target with the largest score; the lowest frequency wins ties.
pub fn pick_frequency(scores: &ClassScores) -> Result<WindowPick> {
    if scores.scores.is_empty() || scores.scores.len() != scores.targets.len() {
        return Err(Error::EmptyScores);
    }
    let mut best = 0;
    for (i, s) in scores.scores.iter().enumerate().skip(1) {
        if *s > scores.scores[best] {
            best = i;
        }
    }
    Ok(WindowPick {
        frequency: scores.targets[best],
        end_time: scores.end_time,
    })
}
