use crate::{Error, Result};

/// Triangular band filter: zero at `center ± bandwidth/2`, linear in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularFilter {
    pub center: f64,
    pub bandwidth: f64,
    pub gain: f64,
}

impl TriangularFilter {
    pub fn new(center: f64, bandwidth: f64, gain: f64) -> Result<Self> {
        let ok = [center, bandwidth, gain].iter().all(|v| v.is_finite())
            && bandwidth > 0.0
            && gain > 0.0
            && center - bandwidth / 2.0 > 0.0;
        if !ok {
            return Err(Error::InvalidConfig(format!(
                "triangular filter needs bandwidth > 0, gain > 0 and center - bandwidth/2 > 0 \
                 (center {center}, bandwidth {bandwidth}, gain {gain})"
            )));
        }
        Ok(Self {
            center,
            bandwidth,
            gain,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        let half = self.bandwidth / 2.0;
        (self.center - half, self.center + half)
    }

    /// Filter weight at `f`.
    ///
    /// The rising edge is `(f - low) / bandwidth * gain`, so the apex at the
    /// center is `gain / 2`, not `gain`.
    pub fn response(&self, f: f64) -> f64 {
        let (low, high) = self.support();
        if f >= low && f <= self.center {
            (f - low) / self.bandwidth * self.gain
        } else if f > self.center && f <= high {
            (high - f) / self.bandwidth * self.gain
        } else {
            0.0
        }
    }

    pub fn peak(&self) -> f64 {
        self.gain / 2.0
    }
}

/// One triangular filter per target plus a second-harmonic filter with the
/// same bandwidth and gain centered at twice the target.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    targets: Vec<f64>,
    fundamentals: Vec<TriangularFilter>,
    harmonics: Vec<TriangularFilter>,
    harmonic_weight: f64,
}

impl FilterBank {
    pub fn new(targets: &[f64], bandwidths: &[f64], gains: &[f64], harmonic_weight: f64) -> Result<Self> {
        let k = targets.len();
        if k < 2 {
            return Err(Error::InvalidConfig(format!("filter bank needs at least 2 targets, got {k}")));
        }
        if bandwidths.len() != k || gains.len() != k {
            return Err(Error::InvalidConfig(format!(
                "{k} targets but {} bandwidths and {} gains",
                bandwidths.len(),
                gains.len()
            )));
        }
        if targets.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidConfig("targets must be strictly ascending".into()));
        }
        if !(harmonic_weight.is_finite() && harmonic_weight >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "harmonic weight must be >= 0, got {harmonic_weight}"
            )));
        }
        let mut fundamentals = Vec::with_capacity(k);
        let mut harmonics = Vec::with_capacity(k);
        for i in 0..k {
            fundamentals.push(TriangularFilter::new(targets[i], bandwidths[i], gains[i])?);
            harmonics.push(TriangularFilter::new(2.0 * targets[i], bandwidths[i], gains[i])?);
        }
        // every other target must sit below the half-height region of this filter
        for (i, filter) in fundamentals.iter().enumerate() {
            let half_width = filter.bandwidth / 4.0;
            if let Some(other) = targets
                .iter()
                .enumerate()
                .find(|&(j, f)| j != i && (f - filter.center).abs() <= half_width)
            {
                return Err(Error::InvalidConfig(format!(
                    "filter at {} Hz (bandwidth {}) reaches half height at target {} Hz",
                    filter.center, filter.bandwidth, other.1
                )));
            }
        }
        Ok(Self {
            targets: targets.to_vec(),
            fundamentals,
            harmonics,
            harmonic_weight,
        })
    }

    /// Same bandwidth and gain for every target.
    pub fn uniform(targets: &[f64], bandwidth: f64, gain: f64, harmonic_weight: f64) -> Result<Self> {
        let k = targets.len();
        Self::new(targets, &vec![bandwidth; k], &vec![gain; k], harmonic_weight)
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn fundamentals(&self) -> &[TriangularFilter] {
        &self.fundamentals
    }

    pub fn harmonics(&self) -> &[TriangularFilter] {
        &self.harmonics
    }

    pub fn harmonic_weight(&self) -> f64 {
        self.harmonic_weight
    }

    pub fn bandwidths(&self) -> Vec<f64> {
        self.fundamentals.iter().map(|f| f.bandwidth).collect()
    }

    pub fn gains(&self) -> Vec<f64> {
        self.fundamentals.iter().map(|f| f.gain).collect()
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Lowest and highest frequency touched by any filter.
    pub fn coverage(&self) -> (f64, f64) {
        self.fundamentals
            .iter()
            .chain(&self.harmonics)
            .map(|f| f.support())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn literal_triangle_values() {
        let h = TriangularFilter::new(10.0, 2.0, 1.0).unwrap();
        assert_eq!(h.response(9.0), 0.0);
        assert_eq!(h.response(10.0), 0.5);
        assert_eq!(h.response(10.5), 0.25);
        assert_eq!(h.response(11.0), 0.0);
        assert_eq!(h.response(12.0), 0.0);
    }

    #[test]
    fn invalid_filters() {
        assert!(TriangularFilter::new(10.0, 0.0, 1.0).is_err());
        assert!(TriangularFilter::new(10.0, 1.0, 0.0).is_err());
        assert!(TriangularFilter::new(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn bank_layout() {
        let bank = FilterBank::uniform(&[8.0, 14.0, 28.0], 1.0, 2.0, 0.5).unwrap();
        assert_eq!(bank.harmonics()[2].center, 56.0);
        assert_eq!(bank.harmonics()[0].bandwidth, 1.0);
        assert_eq!(bank.coverage(), (7.5, 56.5));
    }

    #[test]
    fn bank_rejects_bad_layouts() {
        assert!(FilterBank::uniform(&[8.0], 1.0, 1.0, 0.0).is_err());
        assert!(FilterBank::uniform(&[14.0, 8.0], 1.0, 1.0, 0.0).is_err());
        assert!(FilterBank::uniform(&[8.0, 14.0], 1.0, 1.0, -0.1).is_err());
        // 6.5 Hz would sit at half height of a 2 Hz wide filter around 6 Hz
        assert!(FilterBank::uniform(&[6.0, 6.5], 2.0, 1.0, 0.0).is_err());
        assert!(FilterBank::uniform(&[6.0, 6.5], 1.0, 1.0, 0.0).is_ok());
    }

    proptest! {
        #[test]
        fn symmetric_and_compact(
            center in 1.0f64..60.0,
            bw in 0.05f64..2.0,
            gain in 0.1f64..5.0,
            d in 0.0f64..3.0,
        ) {
            let h = TriangularFilter::new(center, bw, gain).unwrap();
            let a = h.response(center + d);
            let b = h.response(center - d);
            prop_assert!((a - b).abs() <= 1e-9 * gain);
            if d > bw / 2.0 + 1e-9 {
                prop_assert_eq!(a, 0.0);
            }
            prop_assert!(a >= 0.0 && a <= h.peak() + 1e-12);
        }
    }
}
