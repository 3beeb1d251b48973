use std::cell::RefCell;
use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

use super::{PreprocessConfig, SampledSignal};
use crate::{Error, Result};

/// Magnitudes on a uniform frequency grid starting at `first`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    first: f64,
    spacing: f64,
    magnitudes: Vec<f64>,
}

impl Spectrum {
    pub fn new(first: f64, spacing: f64, magnitudes: Vec<f64>) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0 && first.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "spectrum grid needs finite start and positive spacing, got {first} / {spacing}"
            )));
        }
        if magnitudes.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidConfig(
                "spectrum magnitudes must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            first,
            spacing,
            magnitudes,
        })
    }

    pub fn first_frequency(&self) -> f64 {
        self.first
    }

    pub fn last_frequency(&self) -> f64 {
        self.frequency(self.magnitudes.len().saturating_sub(1))
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn frequency(&self, bin: usize) -> f64 {
        self.first + bin as f64 * self.spacing
    }

    pub fn bin_frequencies(&self) -> Vec<f64> {
        (0..self.magnitudes.len()).map(|i| self.frequency(i)).collect()
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    /// Bins whose frequency lies in `[low, high]`.
    pub fn restrict(&self, low: f64, high: f64) -> Spectrum {
        let eps = 1e-9 * self.spacing;
        let start = (((low - self.first) / self.spacing - eps).ceil().max(0.0)) as usize;
        let end = ((((high - self.first) / self.spacing) + eps).floor() + 1.0).max(0.0) as usize;
        let end = end.min(self.magnitudes.len());
        let start = start.min(end);
        Spectrum {
            first: self.frequency(start),
            spacing: self.spacing,
            magnitudes: self.magnitudes[start..end].to_vec(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Spectrum {
        Spectrum {
            first: self.first,
            spacing: self.spacing,
            magnitudes: self.magnitudes.iter().map(|m| m * factor).collect(),
        }
    }

    /// Bin index and frequency of the largest magnitude; the first wins on ties.
    pub fn peak(&self) -> Option<(usize, f64)> {
        let mut best: Option<usize> = None;
        for (i, m) in self.magnitudes.iter().enumerate() {
            if best.is_none_or(|b| *m > self.magnitudes[b]) {
                best = Some(i);
            }
        }
        best.map(|i| (i, self.frequency(i)))
    }
}

/// Symmetric Hamming taper, `0.54 - 0.46 cos(2 pi i / (n - 1))`.
pub fn hamming(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let denom = (n - 1) as f64;
    (0..n)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / denom).cos())
        .collect()
}

/// Smallest power of two that covers the window and gives bins no wider than `resolution`.
pub fn fft_len(window_len: usize, sampling_rate: f64, resolution: f64) -> usize {
    let needed = (sampling_rate / resolution).ceil() as usize;
    needed.max(window_len).max(1).next_power_of_two()
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Hamming-tapered, zero-padded amplitude spectrum over `[0, fs/2]`.
///
/// Magnitudes are scaled by `2 / sum(taper)` so a unit sinusoid that falls on
/// a bin reads close to 1.
pub fn magnitude_spectrum(window: &SampledSignal, config: &PreprocessConfig) -> Result<Spectrum> {
    if window.channel_count() != 1 {
        return Err(Error::Multichannel(window.channel_count()));
    }
    if !(config.fft_resolution.is_finite() && config.fft_resolution > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "fft resolution must be positive, got {}",
            config.fft_resolution
        )));
    }
    let x = window.channel(0);
    let fs = window.sampling_rate();
    let taper = hamming(x.len());
    let nfft = fft_len(x.len(), fs, config.fft_resolution);
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .zip(&taper)
        .map(|(v, w)| Complex::new(v * w, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(nfft)
        .collect();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(nfft).process(&mut buf));
    let norm = 2.0 / taper.iter().sum::<f64>();
    let mags = buf[..=nfft / 2].iter().map(|c| c.norm() * norm).collect();
    Spectrum::new(0.0, fs / nfft as f64, mags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, secs: f64, fs: f64) -> SampledSignal {
        let n = (secs * fs).round() as usize;
        SampledSignal::single(
            "Oz",
            (0..n)
                .map(|i| (2.0 * PI * freq * i as f64 / fs).sin())
                .collect(),
            fs,
        )
        .unwrap()
    }

    #[test]
    fn hamming_endpoints() {
        let w = hamming(101);
        assert!((w[0] - 0.08).abs() < 1e-15);
        assert!((w[100] - 0.08).abs() < 1e-15);
        assert!((w[50] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ten_hz_tone_peaks_at_ten() {
        let s = magnitude_spectrum(&tone(10.0, 4.0, 256.0), &PreprocessConfig::default()).unwrap();
        assert!(s.spacing() <= 0.05);
        assert_eq!(s.first_frequency(), 0.0);
        assert!((s.last_frequency() - 128.0).abs() < 1e-9);
        let (_, f) = s.peak().unwrap();
        assert!((f - 10.0).abs() <= 0.05, "peak at {f}");
        let (i, _) = s.peak().unwrap();
        assert!((s.magnitudes()[i] - 1.0).abs() < 0.01);
    }

    #[test]
    fn stimulus_tones_peak_at_nearest_bin() {
        for fs in [256.0, 512.0] {
            for f in [6.0, 6.5, 7.0, 7.5, 8.2, 9.3, 10.0] {
                let s = magnitude_spectrum(&tone(f, 4.0, fs), &PreprocessConfig::default()).unwrap();
                let nearest = (f / s.spacing()).round() as usize;
                let (i, _) = s.peak().unwrap();
                assert_eq!(i, nearest, "{f} Hz at fs {fs}");
            }
        }
    }

    #[test]
    fn zero_window_zero_spectrum() {
        let s = SampledSignal::single("Oz", vec![0.0; 512], 128.0).unwrap();
        let spec = magnitude_spectrum(&s, &PreprocessConfig::default()).unwrap();
        assert!(spec.magnitudes().iter().all(|m| *m == 0.0));
    }

    #[test]
    fn multichannel_rejected() {
        let s = SampledSignal::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0; 8], vec![0.0; 8]],
            8.0,
        )
        .unwrap();
        assert!(matches!(
            magnitude_spectrum(&s, &PreprocessConfig::default()),
            Err(Error::Multichannel(2))
        ));
    }

    #[test]
    fn restrict_keeps_inclusive_range() {
        let s = Spectrum::new(0.0, 0.5, vec![1.0; 21]).unwrap();
        let r = s.restrict(2.0, 4.0);
        assert_eq!(r.len(), 5);
        assert_eq!(r.first_frequency(), 2.0);
        assert_eq!(r.last_frequency(), 4.0);
        assert!(s.restrict(20.0, 30.0).is_empty());
    }
}
