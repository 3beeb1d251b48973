use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;

use super::{
    baseline, check_manifest, ensure_dir, from_model, model_path, plan, same_targets, write_file, FormatArg,
    MethodArg, SignalArgs, OUT_DIR_ENV,
};
use crate::io::{load_dataset, render_csv, render_text, MethodKind, TrainedModel};
use crate::metrics::aggregate_report;
use crate::pipeline::Method;
use crate::signal::WindowPlan;

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
    #[arg(long)]
    pub manifest: PathBuf,
    /// Model file, or a directory holding `<subject>.<method>.toml` files.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Window length for PSDA and CCA when no trained model is found.
    #[arg(long, default_value_t = 4.0)]
    pub window_sec: f64,
    #[command(flatten)]
    pub signal: SignalArgs,
}

fn find_model(root: Option<&Path>, subject: &str, kind: MethodKind) -> anyhow::Result<Option<TrainedModel>> {
    let Some(root) = root else { return Ok(None) };
    let path = if root.is_dir() {
        model_path(root, subject, kind)
    } else {
        root.to_path_buf()
    };
    if !path.is_file() {
        return Ok(None);
    }
    let model = TrainedModel::load(&path)?;
    // a single model file only serves its own method
    if model.method != kind {
        if root.is_dir() {
            bail!("{} holds a {} model, expected {}", path.display(), model.method, kind);
        }
        return Ok(None);
    }
    Ok(Some(model))
}

pub fn run(args: &EvalArgs) -> anyhow::Result<()> {
    check_manifest(&args.manifest)?;
    if let Some(m) = &args.model {
        if !m.exists() {
            bail!("model not found: {}", m.display());
        }
    }
    let dataset = load_dataset(&args.manifest)?;
    let targets = &dataset.manifest.targets;
    let default_plan = plan(args.window_sec, args.signal.step_sec)?;
    let config = args.signal.preprocess();

    let mut reports = Vec::new();
    for subject in &dataset.subjects {
        for kind in args.method.kinds() {
            let model = find_model(args.model.as_deref(), &subject.id, kind)?;
            let (method, plan): (Method, WindowPlan) = match &model {
                Some(m) => {
                    if !same_targets(&m.targets, targets) {
                        bail!(
                            "{} model for subject {} has targets {:?}, dataset has {:?}",
                            kind,
                            subject.id,
                            m.targets,
                            targets
                        );
                    }
                    (from_model(m, &args.signal)?, m.plan)
                }
                None if kind == MethodKind::Bifb => bail!(
                    "no trained BIFB model for subject {}; run `bifb train` and pass --model",
                    subject.id
                ),
                None => (baseline(kind, targets, &args.signal)?, default_plan),
            };
            let outcomes = method
                .evaluate(&subject.trials, &plan, &config)
                .with_context(|| format!("evaluating {} on subject {}", kind.label(), subject.id))?;
            reports.push(aggregate_report(&subject.id, kind.label(), &outcomes, targets.len())?);
        }
    }

    ensure_dir(&args.out)?;
    let (text, name) = match args.format {
        FormatArg::Csv => (render_csv(&reports)?, "report.csv"),
        FormatArg::Text => (render_text(&reports)?, "report.txt"),
    };
    write_file(&args.out.join(name), &text)?;
    print!("{text}");
    Ok(())
}
