use super::SampledSignal;

/// Per-channel z-score with the sample (n - 1) standard deviation.
/// Constant channels become all zeros.
pub fn normalize(signal: &SampledSignal) -> SampledSignal {
    signal.map_channels(zscore)
}

fn zscore(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let std = var.sqrt();
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(std > 1e-12 * scale) {
        return vec![0.0; n];
    }
    x.iter().map(|v| (v - mean) / std).collect()
}
