//! Command-line front end: `synth`, `train`, `eval` and `inspect`.
//!
//! Every output lands under `--out` (or `$BIFB_OUT_DIR`). No output file
//! embeds timestamps, so identical inputs give byte-identical files.

mod eval;
mod inspect;
mod synth;
mod train;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baseline::{CcaDetector, PsdaConfig, PsdaDetector};
use crate::bifb::BifbDetector;
use crate::io::{MethodKind, TrainedModel};
use crate::pipeline::Method;
use crate::signal::{PreprocessConfig, WindowPlan};

pub const OUT_DIR_ENV: &str = "BIFB_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "bifb", version, about = "SSVEP frequency detection: BIFB, PSDA and CCA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit per-subject models and write them to the output directory.
    Train(train::TrainArgs),
    /// Decode every trial and write the per-subject comparison table.
    Eval(eval::EvalArgs),
    /// Generate a seeded synthetic dataset in the canonical format.
    Synth(synth::SynthArgs),
    /// Plot a window spectrum and/or a trained filter bank as SVG.
    Inspect(inspect::InspectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bifb,
    Psda,
    Cca,
    All,
}

impl MethodArg {
    fn kinds(self) -> Vec<MethodKind> {
        match self {
            MethodArg::Bifb => vec![MethodKind::Bifb],
            MethodArg::Psda => vec![MethodKind::Psda],
            MethodArg::Cca => vec![MethodKind::Cca],
            MethodArg::All => MethodKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Text,
}

/// Preprocessing flags shared by train, eval and inspect.
#[derive(Debug, Clone, Args)]
pub struct SignalArgs {
    /// Pass band as LO:HI in Hz.
    #[arg(long, default_value = "5:35", value_parser = parse_band)]
    pub band: (f64, f64),
    /// Channel analysed by BIFB and PSDA.
    #[arg(long, default_value = "Oz")]
    pub channel: String,
    /// Channels fed to CCA (comma separated); all channels when omitted.
    #[arg(long, value_delimiter = ',')]
    pub cca_channels: Vec<String>,
    /// Upper bound on spectrum bin spacing in Hz.
    #[arg(long, default_value_t = 0.05)]
    pub fft_resolution: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step_sec: f64,
}

impl SignalArgs {
    fn preprocess(&self) -> PreprocessConfig {
        PreprocessConfig {
            band_low: self.band.0,
            band_high: self.band.1,
            fft_resolution: self.fft_resolution,
            channel: self.channel.clone(),
        }
    }

    fn cca_channels(&self) -> Option<Vec<String>> {
        (!self.cca_channels.is_empty()).then(|| self.cca_channels.clone())
    }
}

fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad low edge `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad high edge `{hi}`"))?;
    if !(lo > 0.0 && lo < hi) {
        return Err(format!("band needs 0 < LO < HI, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn plan(window: f64, step: f64) -> anyhow::Result<WindowPlan> {
    Ok(WindowPlan::new(window, step)?)
}

fn ensure_dir(path: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(path).with_context(|| format!("cannot create output directory {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn model_path(dir: &Path, subject: &str, method: MethodKind) -> PathBuf {
    dir.join(format!("{subject}.{method}.toml"))
}

fn same_targets(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
}

/// PSDA or CCA detector configured from the command line.
fn baseline(kind: MethodKind, targets: &[f64], signal: &SignalArgs) -> anyhow::Result<Method> {
    Ok(match kind {
        MethodKind::Psda => Method::Psda(PsdaDetector::new(
            PsdaConfig::with_default_tolerance(targets)?,
            signal.preprocess(),
        )),
        MethodKind::Cca => Method::Cca(CcaDetector {
            channels: signal.cca_channels(),
            ..CcaDetector::new(targets)
        }),
        MethodKind::Bifb => bail!("BIFB needs a trained filter bank"),
    })
}

/// Detector described by a saved model.
fn from_model(model: &TrainedModel, signal: &SignalArgs) -> anyhow::Result<Method> {
    match (&model.bank, model.method) {
        (Some(bank), MethodKind::Bifb) => Ok(Method::Bifb(BifbDetector::new(bank.clone(), signal.preprocess()))),
        (None, MethodKind::Bifb) => bail!("BIFB model has no filter bank"),
        (_, kind) => baseline(kind, &model.targets, signal),
    }
}

fn check_manifest(path: &Path) -> anyhow::Result<()> {
    if !path.is_file() {
        bail!("manifest not found: {}", path.display());
    }
    Ok(())
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Train(args) => train::run(&args),
        Command::Eval(args) => eval::run(&args),
        Command::Synth(args) => synth::run(&args),
        Command::Inspect(args) => inspect::run(&args),
    }
}
