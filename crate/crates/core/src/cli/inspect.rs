use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;

use super::{check_manifest, ensure_dir, plan, SignalArgs, OUT_DIR_ENV};
use crate::io::{load_dataset, plot_spectrum, write_svg, TrainedModel};
use crate::pipeline::{preprocess, ChannelSelection};
use crate::signal::{magnitude_spectrum, window_ranges};

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: PathBuf,
    /// Trained BIFB model whose filter bank is drawn.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, requires = "subject")]
    pub manifest: Option<PathBuf>,
    #[arg(long, requires = "manifest")]
    pub subject: Option<String>,
    /// Trial index within the subject.
    #[arg(long, default_value_t = 0)]
    pub trial: usize,
    /// Window whose end time is closest to this many seconds; the first window when omitted.
    #[arg(long)]
    pub at: Option<f64>,
    /// Window length; the model's window when a model is given, else 4 s.
    #[arg(long)]
    pub window_sec: Option<f64>,
    #[command(flatten)]
    pub signal: SignalArgs,
}

pub fn run(args: &InspectArgs) -> anyhow::Result<()> {
    let model = args.model.as_deref().map(TrainedModel::load).transpose()?;
    if model.is_none() && args.manifest.is_none() {
        bail!("nothing to inspect: pass --model and/or --manifest with --subject");
    }
    ensure_dir(&args.out)?;
    let bank = model.as_ref().and_then(|m| m.bank.as_ref());

    if let (Some(manifest), Some(subject)) = (&args.manifest, &args.subject) {
        check_manifest(manifest)?;
        let dataset = load_dataset(manifest)?;
        let entry = dataset
            .subjects
            .iter()
            .find(|s| &s.id == subject)
            .with_context(|| format!("subject {subject} not in {}", manifest.display()))?;
        let trial = entry.trials.get(args.trial).with_context(|| {
            format!("subject {subject} has {} trials, index {} requested", entry.trials.len(), args.trial)
        })?;
        let window = match (args.window_sec, &model) {
            (Some(w), _) => w,
            (None, Some(m)) => m.plan.window_seconds,
            (None, None) => 4.0,
        };
        let plan = plan(window, args.signal.step_sec)?;
        let config = args.signal.preprocess();
        let prepared = preprocess(&trial.signal, &config, ChannelSelection::One(&config.channel))?;
        let ranges = window_ranges(prepared.len(), prepared.sampling_rate(), &plan);
        let at = args.at.unwrap_or(window);
        let (end, range) = ranges
            .into_iter()
            .min_by(|a, b| (a.0 - at).abs().total_cmp(&(b.0 - at).abs()))
            .with_context(|| format!("trial is shorter than one {window} s window"))?;
        let spectrum = magnitude_spectrum(&prepared.slice(range.start, range.end), &config)?;
        let hi = match bank {
            Some(b) => b.coverage().1 + 2.0,
            None => config.band_high,
        };
        let shown = spectrum.restrict(0.0, hi.min(prepared.sampling_rate() / 2.0));
        let path = args.out.join("spectrum.svg");
        write_svg(&path, &plot_spectrum(&shown, bank))?;
        println!("window ending at {end} s -> {}", path.display());
    }

    if let Some(bank) = bank {
        let spectrum = crate::signal::Spectrum::new(0.0, 0.05, vec![0.0; (bank.coverage().1 / 0.05) as usize + 40])?;
        let path = args.out.join("filter_bank.svg");
        write_svg(&path, &plot_spectrum(&spectrum, Some(bank)))?;
        println!("filter bank -> {}", path.display());
    }
    Ok(())
}
