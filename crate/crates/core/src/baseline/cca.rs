use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::bifb::WindowPick;
use crate::pipeline::WindowClassifier;
use crate::signal::SampledSignal;
use crate::{Error, Result};

/// Ridge added to each covariance block, relative to its mean diagonal.
const RIDGE: f64 = 1e-8;

/// Raw `sin(2 pi h f t)`, `cos(2 pi h f t)` rows for `h = 1..=harmonics`,
/// sampled at `t = i / fs`.
pub fn reference_rows(target: f64, samples: usize, sampling_rate: f64, harmonics: usize) -> Result<Vec<Vec<f64>>> {
    if harmonics == 0 {
        return Err(Error::InvalidConfig("harmonic count must be at least 1".into()));
    }
    let nyquist = sampling_rate / 2.0;
    if target * harmonics as f64 >= nyquist {
        return Err(Error::AboveNyquist {
            frequency: target,
            harmonic: harmonics,
            nyquist,
        });
    }
    let mut rows = Vec::with_capacity(2 * harmonics);
    for h in 1..=harmonics {
        let w = 2.0 * PI * h as f64 * target / sampling_rate;
        rows.push((0..samples).map(|i| (w * i as f64).sin()).collect());
        rows.push((0..samples).map(|i| (w * i as f64).cos()).collect());
    }
    Ok(rows)
}

/// Zero-mean sinusoidal references for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct References {
    pub frequency: f64,
    pub rows: Vec<Vec<f64>>,
}

pub fn build_references(target: f64, samples: usize, sampling_rate: f64, harmonics: usize) -> Result<References> {
    let mut rows = reference_rows(target, samples, sampling_rate, harmonics)?;
    for row in &mut rows {
        let mean = row.iter().sum::<f64>() / row.len().max(1) as f64;
        row.iter_mut().for_each(|v| *v -= mean);
    }
    Ok(References {
        frequency: target,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    pub entries: Vec<References>,
}

impl ReferenceSet {
    pub fn new(targets: &[f64], samples: usize, sampling_rate: f64, harmonics: usize) -> Result<Self> {
        let entries = targets
            .iter()
            .map(|f| build_references(*f, samples, sampling_rate, harmonics))
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcaSolution {
    /// Largest canonical correlation, clamped to `[0, 1]`.
    pub rho: f64,
    pub x_weights: Vec<f64>,
    pub y_weights: Vec<f64>,
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows[0].len();
    DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c])
}

fn centered(mut m: DMatrix<f64>) -> DMatrix<f64> {
    for mut row in m.row_iter_mut() {
        let mean = row.mean();
        row.add_scalar_mut(-mean);
    }
    m
}

fn ridged(mut c: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let mean_diag = c.diagonal().mean();
    if !(mean_diag > 0.0) {
        return None;
    }
    for i in 0..c.nrows() {
        c[(i, i)] += RIDGE * mean_diag;
    }
    Some(c)
}

/// Largest canonical correlation between the row spaces of `x` and `y`.
///
/// Both blocks are centered, their covariances get a small ridge, and the
/// correlation is the top singular value of `Lx^-1 Cxy Ly^-T` where `L` are
/// the Cholesky factors. Rows are variables, columns are samples.
pub fn cca_max_correlation(x: &[Vec<f64>], y: &[Vec<f64>]) -> Result<CcaSolution> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidConfig("CCA needs at least one row per block".into()));
    }
    let n = x[0].len();
    if x.iter().chain(y).any(|r| r.len() != n) {
        return Err(Error::InvalidConfig("CCA blocks must have equal sample counts".into()));
    }
    let rows = x.len() + y.len();
    if n <= rows {
        return Err(Error::Underdetermined { samples: n, rows });
    }
    if x.iter().chain(y).flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let xm = centered(to_matrix(x));
    let ym = centered(to_matrix(y));
    let scale = 1.0 / (n - 1) as f64;
    let cxy = &xm * ym.transpose() * scale;
    let zero = || CcaSolution {
        rho: 0.0,
        x_weights: vec![0.0; x.len()],
        y_weights: vec![0.0; y.len()],
    };
    let (Some(cxx), Some(cyy)) = (
        ridged(&xm * xm.transpose() * scale),
        ridged(&ym * ym.transpose() * scale),
    ) else {
        return Ok(zero());
    };
    let (Some(lx), Some(ly)) = (cxx.cholesky(), cyy.cholesky()) else {
        return Ok(zero());
    };
    let lx = lx.l();
    let ly = ly.l();
    // K = Lx^-1 Cxy Ly^-T
    let left = lx
        .solve_lower_triangular(&cxy)
        .ok_or(Error::NonFinite)?;
    let k = ly
        .solve_lower_triangular(&left.transpose())
        .ok_or(Error::NonFinite)?
        .transpose();
    let svd = k.svd(true, true);
    let (best, sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, s)| if *s > acc.1 { (i, *s) } else { acc });
    let u: DVector<f64> = svd.u.as_ref().map(|u| u.column(best).into_owned()).ok_or(Error::NonFinite)?;
    let v: DVector<f64> = svd
        .v_t
        .as_ref()
        .map(|vt| vt.row(best).transpose())
        .ok_or(Error::NonFinite)?;
    let wx = lx.transpose().solve_upper_triangular(&u).ok_or(Error::NonFinite)?;
    let wy = ly.transpose().solve_upper_triangular(&v).ok_or(Error::NonFinite)?;
    Ok(CcaSolution {
        rho: sigma.clamp(0.0, 1.0),
        x_weights: wx.iter().copied().collect(),
        y_weights: wy.iter().copied().collect(),
    })
}

/// Target whose references correlate best with the window; ties go to the lowest frequency.
pub fn cca_pick(window: &SampledSignal, references: &ReferenceSet, end_time: f64) -> Result<WindowPick> {
    let mut best: Option<(f64, f64)> = None;
    for entry in &references.entries {
        let rho = cca_max_correlation(window.samples(), &entry.rows)?.rho;
        if best.is_none_or(|(_, r)| rho > r) {
            best = Some((entry.frequency, rho));
        }
    }
    let (frequency, _) = best.ok_or(Error::EmptyScores)?;
    Ok(WindowPick { frequency, end_time })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcaDetector {
    pub targets: Vec<f64>,
    pub harmonic_count: usize,
    /// Channels fed to CCA; `None` uses every channel of the recording.
    pub channels: Option<Vec<String>>,
}

impl CcaDetector {
    pub fn new(targets: &[f64]) -> Self {
        Self {
            targets: targets.to_vec(),
            harmonic_count: 2,
            channels: None,
        }
    }
}

impl WindowClassifier for CcaDetector {
    fn pick(&self, window: &SampledSignal, end_time: f64) -> Result<WindowPick> {
        let refs = ReferenceSet::new(&self.targets, window.len(), window.sampling_rate(), self.harmonic_count)?;
        cca_pick(window, &refs, end_time)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    const FS: f64 = 256.0;
    const N: usize = 1024;

    fn sine(freq: f64, phase: f64) -> Vec<f64> {
        (0..N)
            .map(|i| (2.0 * PI * freq * i as f64 / FS + phase).sin())
            .collect()
    }

    #[test]
    fn reference_shape_and_values() {
        let raw = reference_rows(10.0, N, FS, 2).unwrap();
        assert_eq!(raw.len(), 4);
        assert_eq!(raw[0][0], 0.0);
        assert_eq!(raw[1][0], 1.0);
        let refs = build_references(9.3, N, FS, 2).unwrap();
        for row in &refs.rows {
            let mean = row.iter().sum::<f64>() / N as f64;
            assert!(mean.abs() < 1e-10);
        }
        assert!(matches!(
            reference_rows(50.0, N, FS, 3),
            Err(Error::AboveNyquist { .. })
        ));
        assert!(reference_rows(10.0, N, FS, 0).is_err());
    }

    #[test]
    fn exact_reference_row_correlates_fully() {
        let refs = build_references(12.0, N, FS, 2).unwrap();
        let x = vec![reference_rows(12.0, N, FS, 1).unwrap()[0].clone()];
        assert!(cca_max_correlation(&x, &refs.rows).unwrap().rho >= 0.999);
    }

    #[test]
    fn any_phase_correlates_fully() {
        let refs = build_references(8.2, N, FS, 2).unwrap();
        for phase in [0.3, 1.1, 2.5, 4.0] {
            let rho = cca_max_correlation(&[sine(8.2, phase)], &refs.rows).unwrap().rho;
            assert!(rho >= 0.999, "phase {phase}: {rho}");
        }
    }

    #[test]
    fn null_correlation_stays_small() {
        let refs = build_references(10.0, N, FS, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: Vec<f64> = (0..N).map(|_| rng.sample(StandardNormal)).collect();
            let rho = cca_max_correlation(&[x], &refs.rows).unwrap().rho;
            assert!(rho < 0.5, "{rho}");
        }
    }

    #[test]
    fn symmetric_in_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..N).map(|i| rng.random::<f64>() + (i as f64 * 0.2).sin()).collect())
            .collect();
        let refs = build_references(10.0, N, FS, 2).unwrap();
        let a = cca_max_correlation(&x, &refs.rows).unwrap().rho;
        let b = cca_max_correlation(&refs.rows, &x).unwrap().rho;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn weights_reproduce_rho() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<Vec<f64>> = (0..2)
            .map(|_| {
                let s = sine(10.0, rng.random::<f64>() * 6.0);
                s.iter().map(|v| v + rng.sample::<f64, _>(StandardNormal)).collect()
            })
            .collect();
        let refs = build_references(10.0, N, FS, 2).unwrap();
        let sol = cca_max_correlation(&x, &refs.rows).unwrap();
        let project = |rows: &[Vec<f64>], w: &[f64]| -> Vec<f64> {
            (0..N).map(|i| rows.iter().zip(w).map(|(r, c)| r[i] * c).sum()).collect()
        };
        let u = project(&x, &sol.x_weights);
        let v = project(&refs.rows, &sol.y_weights);
        let mu = u.iter().sum::<f64>() / N as f64;
        let mv = v.iter().sum::<f64>() / N as f64;
        let cov: f64 = u.iter().zip(&v).map(|(a, b)| (a - mu) * (b - mv)).sum();
        let su: f64 = u.iter().map(|a| (a - mu).powi(2)).sum::<f64>().sqrt();
        let sv: f64 = v.iter().map(|b| (b - mv).powi(2)).sum::<f64>().sqrt();
        assert!((cov / (su * sv) - sol.rho).abs() < 1e-6);
    }

    #[test]
    fn errors() {
        let refs = build_references(10.0, 4, FS, 2).unwrap();
        assert!(matches!(
            cca_max_correlation(&[vec![0.0; 4]], &refs.rows),
            Err(Error::Underdetermined { samples: 4, rows: 5 })
        ));
        let refs = build_references(10.0, N, FS, 2).unwrap();
        let mut x = sine(10.0, 0.0);
        x[3] = f64::NAN;
        assert!(matches!(cca_max_correlation(&[x], &refs.rows), Err(Error::NonFinite)));
        let zero = cca_max_correlation(&[vec![0.0; N]], &refs.rows).unwrap();
        assert_eq!(zero.rho, 0.0);
    }

    #[test]
    fn pick_and_tie_break() {
        let targets = [8.0, 14.0, 28.0];
        let refs = ReferenceSet::new(&targets, N, FS, 2).unwrap();
        let w = SampledSignal::single("Oz", sine(14.0, 0.7), FS).unwrap();
        assert_eq!(cca_pick(&w, &refs, 4.0).unwrap().frequency, 14.0);
        let flat = SampledSignal::single("Oz", vec![0.0; N], FS).unwrap();
        assert_eq!(cca_pick(&flat, &refs, 4.0).unwrap().frequency, 8.0);
    }
}
