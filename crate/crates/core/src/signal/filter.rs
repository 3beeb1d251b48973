use std::f64::consts::PI;

use super::{check_band, SampledSignal};
use crate::{Error, Result};

/// Windowed-sinc band-pass taps: difference of two unity-DC Hamming low-pass
/// designs. Length is `round(2 * fs / low)`, forced odd so the filter has an
/// integer group delay.
pub fn bandpass_taps(sampling_rate: f64, low: f64, high: f64) -> Result<Vec<f64>> {
    check_band(low, high, sampling_rate)?;
    let mut len = (2.0 * sampling_rate / low).round() as usize;
    if len.is_multiple_of(2) {
        len += 1;
    }
    let len = len.max(3);
    let window = super::hamming(len);
    let lowpass = |cutoff: f64| {
        let fc = cutoff / sampling_rate;
        let mid = (len - 1) as f64 / 2.0;
        let mut taps: Vec<f64> = (0..len)
            .map(|i| {
                let m = i as f64 - mid;
                let sinc = if m == 0.0 {
                    2.0 * fc
                } else {
                    (2.0 * PI * fc * m).sin() / (PI * m)
                };
                sinc * window[i]
            })
            .collect();
        let dc: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= dc);
        taps
    };
    let wide = lowpass(high);
    let narrow = lowpass(low);
    Ok(wide.iter().zip(&narrow).map(|(a, b)| a - b).collect())
}

/// Zero-phase band-pass: the FIR from [`bandpass_taps`] applied forward and
/// backward over an odd-reflected extension of each channel.
pub fn bandpass(signal: &SampledSignal, low: f64, high: f64) -> Result<SampledSignal> {
    let taps = bandpass_taps(signal.sampling_rate(), low, high)?;
    if signal.len() <= taps.len() {
        return Err(Error::SignalTooShort {
            len: signal.len(),
            taps: taps.len(),
        });
    }
    Ok(signal.map_channels(|x| filtfilt(&taps, x)))
}

fn filtfilt(taps: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let pad = (3 * taps.len()).min(n - 1);
    let first = x[0];
    let last = x[n - 1];
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

    let mut y = fir_steady(taps, &ext);
    y.reverse();
    let mut y = fir_steady(taps, &y);
    y.reverse();
    y.drain(..pad);
    y.truncate(n);
    y
}

/// Causal FIR where the input is held at `x[0]` before the first sample.
fn fir_steady(taps: &[f64], x: &[f64]) -> Vec<f64> {
    let x0 = x[0];
    (0..x.len())
        .map(|i| {
            taps.iter()
                .enumerate()
                .map(|(k, h)| h * if k <= i { x[i - k] } else { x0 })
                .sum()
        })
        .collect()
}
