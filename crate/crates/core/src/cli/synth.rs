use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ensure_dir, OUT_DIR_ENV};
use crate::io::synth::noise_std_for_snr;
use crate::io::{synth_corpus, write_trial_csv, DatasetManifest, NoiseKind, SubjectEntry, SynthSpec, TrialEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    White,
    Pink,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: PathBuf,
    /// Stimulus frequencies in Hz, comma separated and ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    pub targets: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub trials_per_target: usize,
    #[arg(long, default_value_t = 1)]
    pub subjects: usize,
    /// Trial length in seconds.
    #[arg(long, default_value_t = 15.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 256.0)]
    pub sampling_rate: f64,
    /// Harmonic amplitudes, fundamental first.
    #[arg(long, value_delimiter = ',', default_value = "1,0.5")]
    pub harmonics: Vec<f64>,
    /// Power-law attenuation exponent across stimulus frequencies.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Frequency with unattenuated amplitude; defaults to the lowest target.
    #[arg(long)]
    pub ref_freq: Option<f64>,
    /// Per-harmonic SNR in dB of the weakest harmonic of the reference stimulus.
    #[arg(long, conflicts_with = "noise_std")]
    pub snr_db: Option<f64>,
    #[arg(long)]
    pub noise_std: Option<f64>,
    #[arg(long, value_enum, default_value_t = NoiseArg::White)]
    pub noise: NoiseArg,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "synthetic")]
    pub name: String,
    #[arg(long, default_value = "Oz")]
    pub channel: String,
    /// Write into an existing, non-empty output directory.
    #[arg(long)]
    pub force: bool,
}

pub fn run(args: &SynthArgs) -> anyhow::Result<()> {
    if args.targets.is_empty() || args.targets.windows(2).any(|w| !(w[0] < w[1])) {
        bail!("--targets must be strictly ascending");
    }
    if args.subjects == 0 || args.trials_per_target == 0 {
        bail!("--subjects and --trials-per-target must be at least 1");
    }
    if args.out.exists() {
        let occupied = std::fs::read_dir(&args.out)
            .with_context(|| format!("cannot read {}", args.out.display()))?
            .next()
            .is_some();
        if occupied && !args.force {
            bail!(
                "output directory {} already exists and is not empty (use --force to overwrite)",
                args.out.display()
            );
        }
    }
    ensure_dir(&args.out)?;

    let reference = args.ref_freq.unwrap_or(args.targets[0]);
    let mut template = SynthSpec {
        stimulus: reference,
        duration: args.duration,
        sampling_rate: args.sampling_rate,
        harmonic_amplitudes: args.harmonics.clone(),
        attenuation_exponent: args.alpha,
        reference_frequency: reference,
        noise_std: args.noise_std.unwrap_or(0.0),
        noise: match args.noise {
            NoiseArg::White => NoiseKind::White,
            NoiseArg::Pink => NoiseKind::Pink,
        },
        seed: 0,
        channel: args.channel.clone(),
    };
    if let Some(snr) = args.snr_db {
        let weakest = template
            .amplitudes()
            .into_iter()
            .filter(|a| *a > 0.0)
            .fold(f64::INFINITY, f64::min);
        if !weakest.is_finite() {
            bail!("--snr-db needs at least one non-zero harmonic amplitude");
        }
        template.noise_std = noise_std_for_snr(weakest, snr);
    }

    let mut seeds = ChaCha8Rng::seed_from_u64(args.seed);
    let mut subjects = Vec::with_capacity(args.subjects);
    for s in 0..args.subjects {
        let id = format!("Subject{}", s + 1);
        let dir = args.out.join(&id);
        ensure_dir(&dir)?;
        let trials = synth_corpus(&args.targets, args.trials_per_target, &template, seeds.next_u64())?;
        let mut entries = Vec::with_capacity(trials.len());
        for (i, trial) in trials.iter().enumerate() {
            let file = format!("{id}/trial_{i:03}.csv");
            write_trial_csv(&args.out.join(&file), &trial.signal)?;
            entries.push(TrialEntry {
                file,
                stimulus_frequency: trial.frequency,
                duration: args.duration,
            });
        }
        subjects.push(SubjectEntry { id, trials: entries });
    }
    let manifest = DatasetManifest {
        name: args.name.clone(),
        sampling_rate: args.sampling_rate,
        channels: vec![args.channel.clone()],
        targets: args.targets.clone(),
        subjects,
    };
    let path = args.out.join("manifest.toml");
    manifest.write(&path)?;
    println!(
        "wrote {} trials for {} subject(s) to {}",
        manifest.trial_count(),
        args.subjects,
        path.display()
    );
    Ok(())
}
