//! Seeded synthetic SSVEP trials: a sum of phase-randomised harmonics of the
//! stimulus, attenuated as a power law of the stimulus frequency, plus
//! Gaussian noise.

use std::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::pipeline::LabeledTrial;
use crate::signal::SampledSignal;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    #[default]
    White,
    /// 1/f power spectrum, scaled to the requested standard deviation.
    Pink,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub stimulus: f64,
    pub duration: f64,
    pub sampling_rate: f64,
    /// Amplitude of harmonic `h + 1` before attenuation; fundamental first.
    pub harmonic_amplitudes: Vec<f64>,
    /// Amplitudes scale as `(stimulus / reference_frequency)^-attenuation_exponent`.
    pub attenuation_exponent: f64,
    pub reference_frequency: f64,
    pub noise_std: f64,
    pub noise: NoiseKind,
    pub seed: u64,
    pub channel: String,
}

impl SynthSpec {
    /// Noise-free response with fundamental 1.0 and second harmonic 0.5.
    pub fn clean(stimulus: f64, duration: f64, sampling_rate: f64, seed: u64) -> Self {
        Self {
            stimulus,
            duration,
            sampling_rate,
            harmonic_amplitudes: vec![1.0, 0.5],
            attenuation_exponent: 0.0,
            reference_frequency: stimulus,
            noise_std: 0.0,
            noise: NoiseKind::White,
            seed,
            channel: "Oz".into(),
        }
    }

    /// Sets the noise so the weakest non-zero harmonic has the given SNR
    /// (sinusoid power `a^2 / 2` over noise variance).
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        let weakest = self
            .amplitudes()
            .into_iter()
            .filter(|a| *a > 0.0)
            .fold(f64::INFINITY, f64::min);
        if weakest.is_finite() {
            self.noise_std = noise_std_for_snr(weakest, snr_db);
        }
        self
    }

    /// Harmonic amplitudes after the power-law attenuation.
    pub fn amplitudes(&self) -> Vec<f64> {
        let scale = (self.stimulus / self.reference_frequency).powf(-self.attenuation_exponent);
        self.harmonic_amplitudes.iter().map(|a| a * scale).collect()
    }

    /// Phases drawn for each harmonic, the first values of the seeded stream.
    pub fn phases(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.draw_phases(&mut rng)
    }

    fn draw_phases(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..self.harmonic_amplitudes.len())
            .map(|_| rng.random::<f64>() * 2.0 * PI)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.duration) && positive(self.sampling_rate) && positive(self.stimulus)) {
            return Err(Error::InvalidConfig(
                "synthetic trial needs positive duration, sampling rate and stimulus".into(),
            ));
        }
        if !positive(self.reference_frequency) {
            return Err(Error::InvalidConfig("reference frequency must be positive".into()));
        }
        if self.harmonic_amplitudes.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidConfig("harmonic amplitudes must be >= 0".into()));
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::InvalidConfig("noise std must be >= 0".into()));
        }
        let nyquist = self.sampling_rate / 2.0;
        let harmonics = self.harmonic_amplitudes.len();
        if harmonics > 0 && self.stimulus * harmonics as f64 >= nyquist {
            return Err(Error::AboveNyquist {
                frequency: self.stimulus,
                harmonic: harmonics,
                nyquist,
            });
        }
        Ok(())
    }
}

/// Noise standard deviation giving a sinusoid of `amplitude` the SNR `snr_db`.
pub fn noise_std_for_snr(amplitude: f64, snr_db: f64) -> f64 {
    amplitude / 2f64.sqrt() / 10f64.powf(snr_db / 20.0)
}

pub fn synth_trial(spec: &SynthSpec) -> Result<SampledSignal> {
    spec.validate()?;
    let n = ((spec.duration * spec.sampling_rate).round() as usize).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let phases = spec.draw_phases(&mut rng);
    let amplitudes = spec.amplitudes();
    let mut samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / spec.sampling_rate;
            amplitudes
                .iter()
                .zip(&phases)
                .enumerate()
                .map(|(h, (a, phi))| a * (2.0 * PI * (h + 1) as f64 * spec.stimulus * t + phi).sin())
                .sum()
        })
        .collect();
    if spec.noise_std > 0.0 {
        let noise = match spec.noise {
            NoiseKind::White => white(&mut rng, n),
            NoiseKind::Pink => pink(&mut rng, n),
        };
        for (s, e) in samples.iter_mut().zip(noise) {
            *s += spec.noise_std * e;
        }
    }
    SampledSignal::single(spec.channel.clone(), samples, spec.sampling_rate)
}

fn white(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Unit-variance noise with a 1/f power spectrum, shaped in the frequency domain.
fn pink(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut buf: Vec<Complex<f64>> = white(rng, n).into_iter().map(|v| Complex::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let bin = k.min(n - k);
        *c = if bin == 0 { Complex::new(0.0, 0.0) } else { *c / (bin as f64).sqrt() };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let x: Vec<f64> = buf.iter().map(|c| c.re).collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    let std = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    if std > 0.0 {
        x.iter().map(|v| (v - mean) / std).collect()
    } else {
        x
    }
}

/// `trials_per_target` trials for every target, target-major, each with its
/// own seed drawn from a stream seeded by `seed`. The template's stimulus is
/// replaced by each target.
pub fn synth_corpus(
    targets: &[f64],
    trials_per_target: usize,
    template: &SynthSpec,
    seed: u64,
) -> Result<Vec<LabeledTrial>> {
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(targets.len() * trials_per_target);
    for &f in targets {
        for _ in 0..trials_per_target {
            let spec = SynthSpec {
                stimulus: f,
                seed: seeds.next_u64(),
                ..template.clone()
            };
            out.push(LabeledTrial {
                signal: synth_trial(&spec)?,
                frequency: f,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projection(x: &[f64], freq: f64, fs: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (i, v) in x.iter().enumerate() {
            let ph = 2.0 * PI * freq * i as f64 / fs;
            re += v * ph.cos();
            im += v * ph.sin();
        }
        2.0 * (re * re + im * im).sqrt() / x.len() as f64
    }

    #[test]
    fn noise_free_single_harmonic_is_a_sinusoid() {
        let mut spec = SynthSpec::clean(10.0, 2.0, 256.0, 9);
        spec.harmonic_amplitudes = vec![1.0];
        let phi = spec.phases()[0];
        let s = synth_trial(&spec).unwrap();
        for (i, v) in s.channel(0).iter().enumerate() {
            let t = i as f64 / 256.0;
            assert!((v - (2.0 * PI * 10.0 * t + phi).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_bits() {
        let spec = SynthSpec::clean(8.0, 4.0, 256.0, 42).with_snr_db(10.0);
        let a = synth_trial(&spec).unwrap();
        let b = synth_trial(&spec).unwrap();
        let bits = |s: &SampledSignal| s.channel(0).iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        let mut other = spec.clone();
        other.seed = 43;
        assert_ne!(bits(&a), bits(&synth_trial(&other).unwrap()));
    }

    #[test]
    fn power_law_attenuation() {
        let base = SynthSpec {
            attenuation_exponent: 1.0,
            reference_frequency: 8.0,
            harmonic_amplitudes: vec![1.0],
            ..SynthSpec::clean(8.0, 4.0, 256.0, 1)
        };
        let high = SynthSpec {
            stimulus: 16.0,
            ..base.clone()
        };
        assert_eq!(base.amplitudes()[0], 1.0);
        assert_eq!(high.amplitudes()[0], 0.5);
        let a8 = projection(synth_trial(&base).unwrap().channel(0), 8.0, 256.0);
        let a16 = projection(synth_trial(&high).unwrap().channel(0), 16.0, 256.0);
        assert!((a16 / a8 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn projection_recovers_harmonics() {
        let spec = SynthSpec {
            harmonic_amplitudes: vec![1.0, 0.4, 0.2],
            ..SynthSpec::clean(7.0, 4.0, 256.0, 5)
        };
        let s = synth_trial(&spec).unwrap();
        for (h, a) in spec.harmonic_amplitudes.iter().enumerate() {
            let got = projection(s.channel(0), 7.0 * (h + 1) as f64, 256.0);
            assert!((got - a).abs() <= 0.02 * a, "harmonic {}: {got}", h + 1);
        }
    }

    #[test]
    fn nyquist_enforced() {
        let spec = SynthSpec::clean(40.0, 1.0, 128.0, 0);
        assert!(matches!(synth_trial(&spec), Err(Error::AboveNyquist { .. })));
    }

    #[test]
    fn snr_sets_noise_level() {
        let spec = SynthSpec::clean(8.0, 4.0, 256.0, 0).with_snr_db(10.0);
        assert!((spec.noise_std - 0.5 / 2f64.sqrt() / 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pink_noise_has_requested_std() {
        let spec = SynthSpec {
            harmonic_amplitudes: vec![],
            noise_std: 2.0,
            noise: NoiseKind::Pink,
            ..SynthSpec::clean(8.0, 8.0, 256.0, 3)
        };
        let s = synth_trial(&spec).unwrap();
        let x = s.channel(0);
        let var = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((var.sqrt() - 2.0).abs() < 1e-9);
        // more power below 5 Hz than between 40 and 45 Hz
        let low: f64 = (1..20).map(|k| projection(x, k as f64 * 0.25, 256.0)).sum();
        let high: f64 = (160..179).map(|k| projection(x, k as f64 * 0.25, 256.0)).sum();
        assert!(low > 2.0 * high);
    }

    #[test]
    fn corpus_is_target_major_and_seeded() {
        let template = SynthSpec::clean(1.0, 2.0, 128.0, 0).with_snr_db(10.0);
        let a = synth_corpus(&[8.0, 14.0], 3, &template, 7).unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a[2].frequency, 8.0);
        assert_eq!(a[3].frequency, 14.0);
        assert_eq!(a, synth_corpus(&[8.0, 14.0], 3, &template, 7).unwrap());
    }
}
