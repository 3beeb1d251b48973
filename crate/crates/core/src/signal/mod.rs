//! Preprocessing: band-pass filtering, z-score normalization, sliding
//! windows and Hamming-tapered magnitude spectra.

mod filter;
mod normalize;
mod spectrum;
mod windows;

pub use filter::{bandpass, bandpass_taps};
pub use normalize::normalize;
pub use spectrum::{fft_len, hamming, magnitude_spectrum, Spectrum};
pub use windows::{sliding_windows, window_ranges, Window, Windows};

use crate::{Error, Result};

/// Multichannel time series sampled at a fixed rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    channels: Vec<String>,
    samples: Vec<Vec<f64>>,
    sampling_rate: f64,
}

impl SampledSignal {
    pub fn new(channels: Vec<String>, samples: Vec<Vec<f64>>, sampling_rate: f64) -> Result<Self> {
        if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "sampling rate must be positive, got {sampling_rate}"
            )));
        }
        if channels.is_empty() || channels.len() != samples.len() {
            return Err(Error::InvalidSignal(format!(
                "{} channel labels for {} sample rows",
                channels.len(),
                samples.len()
            )));
        }
        let len = samples[0].len();
        if len == 0 {
            return Err(Error::InvalidSignal("no samples".into()));
        }
        if let Some((label, row)) = channels.iter().zip(&samples).find(|(_, s)| s.len() != len) {
            return Err(Error::InvalidSignal(format!(
                "channel `{label}` has {} samples, expected {len}",
                row.len()
            )));
        }
        Ok(Self {
            channels,
            samples,
            sampling_rate,
        })
    }

    pub fn single(label: impl Into<String>, samples: Vec<f64>, sampling_rate: f64) -> Result<Self> {
        Self::new(vec![label.into()], vec![samples], sampling_rate)
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn channel(&self, index: usize) -> &[f64] {
        &self.samples[index]
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.samples[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    pub fn duration(&self) -> f64 {
        self.len() as f64 / self.sampling_rate
    }

    pub fn channel_index(&self, label: &str) -> Result<usize> {
        self.channels
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::UnknownChannel(label.to_string()))
    }

    pub fn select_channel(&self, label: &str) -> Result<Self> {
        let i = self.channel_index(label)?;
        Ok(Self {
            channels: vec![self.channels[i].clone()],
            samples: vec![self.samples[i].clone()],
            sampling_rate: self.sampling_rate,
        })
    }

    /// Keeps the named channels in the given order.
    pub fn select_channels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidConfig("empty channel selection".into()));
        }
        let mut channels = Vec::with_capacity(labels.len());
        let mut samples = Vec::with_capacity(labels.len());
        for label in labels {
            let i = self.channel_index(label.as_ref())?;
            channels.push(self.channels[i].clone());
            samples.push(self.samples[i].clone());
        }
        Ok(Self {
            channels,
            samples,
            sampling_rate: self.sampling_rate,
        })
    }

    /// Samples `start..end` of every channel.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            channels: self.channels.clone(),
            samples: self.samples.iter().map(|s| s[start..end].to_vec()).collect(),
            sampling_rate: self.sampling_rate,
        }
    }

    pub(crate) fn map_channels(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Self {
        Self {
            channels: self.channels.clone(),
            samples: self.samples.iter().map(|s| f(s)).collect(),
            sampling_rate: self.sampling_rate,
        }
    }
}

/// Analysis window length and hop, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowPlan {
    pub window_seconds: f64,
    pub step_seconds: f64,
}

impl WindowPlan {
    pub fn new(window_seconds: f64, step_seconds: f64) -> Result<Self> {
        if !(step_seconds.is_finite() && step_seconds > 0.0 && window_seconds >= step_seconds) {
            return Err(Error::InvalidConfig(format!(
                "window plan needs window >= step > 0, got window {window_seconds} s, step {step_seconds} s"
            )));
        }
        Ok(Self {
            window_seconds,
            step_seconds,
        })
    }

    /// Window length in samples, `round(window_seconds * sampling_rate)`.
    pub fn window_samples(&self, sampling_rate: f64) -> usize {
        (self.window_seconds * sampling_rate).round() as usize
    }

    pub fn step_samples(&self, sampling_rate: f64) -> usize {
        ((self.step_seconds * sampling_rate).round() as usize).max(1)
    }

    /// End time of the third window, the earliest moment the 3-of-4 rule can fire.
    pub fn earliest_detection(&self) -> f64 {
        self.window_seconds + 2.0 * self.step_seconds
    }
}

impl Default for WindowPlan {
    /// 4 s windows moving in 1 s steps.
    fn default() -> Self {
        Self {
            window_seconds: 4.0,
            step_seconds: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessConfig {
    pub band_low: f64,
    pub band_high: f64,
    /// Upper bound on spectrum bin spacing in Hz; windows are zero-padded to reach it.
    pub fft_resolution: f64,
    /// Channel analysed by the spectral detectors.
    pub channel: String,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            band_low: 5.0,
            band_high: 35.0,
            fft_resolution: 0.05,
            channel: "Oz".into(),
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self, sampling_rate: f64) -> Result<()> {
        check_band(self.band_low, self.band_high, sampling_rate)?;
        if !(self.fft_resolution.is_finite() && self.fft_resolution > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "fft resolution must be positive, got {}",
                self.fft_resolution
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_band(low: f64, high: f64, sampling_rate: f64) -> Result<()> {
    let nyquist = sampling_rate / 2.0;
    if !(low > 0.0 && low < high && high < nyquist) {
        return Err(Error::InvalidConfig(format!(
            "band {low}-{high} Hz must satisfy 0 < low < high < {nyquist} Hz (Nyquist)"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_channels() {
        let err = SampledSignal::new(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 2.0], vec![1.0]],
            100.0,
        )
        .unwrap_err();
        assert!(err.to_string().contains("channel `b`"));
    }

    #[test]
    fn rejects_bad_rate_and_empty() {
        assert!(SampledSignal::single("Oz", vec![1.0], 0.0).is_err());
        assert!(SampledSignal::single("Oz", vec![], 10.0).is_err());
    }

    #[test]
    fn window_plan_invariants() {
        assert!(WindowPlan::new(1.0, 2.0).is_err());
        assert!(WindowPlan::new(4.0, 0.0).is_err());
        let plan = WindowPlan::new(4.0, 1.0).unwrap();
        assert_eq!(plan.window_samples(256.0), 1024);
        assert_eq!(plan.earliest_detection(), 6.0);
    }

    #[test]
    fn band_must_respect_nyquist() {
        let mut cfg = PreprocessConfig::default();
        assert!(cfg.validate(256.0).is_ok());
        assert!(cfg.validate(64.0).is_err());
        cfg.band_low = 40.0;
        assert!(cfg.validate(256.0).is_err());
    }

    #[test]
    fn channel_selection() {
        let s = SampledSignal::new(
            vec!["O1".into(), "Oz".into()],
            vec![vec![1.0, 2.0], vec![3.0, 4.0]],
            2.0,
        )
        .unwrap();
        assert_eq!(s.select_channel("Oz").unwrap().channel(0), &[3.0, 4.0]);
        assert!(matches!(s.select_channel("Pz"), Err(Error::UnknownChannel(_))));
        assert_eq!(s.duration(), 1.0);
    }
}
