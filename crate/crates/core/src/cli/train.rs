use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;

use super::{baseline, check_manifest, ensure_dir, model_path, write_file, MethodArg, SignalArgs, OUT_DIR_ENV};
use crate::bifb::{Trainer, TrainingGrid};
use crate::io::{load_dataset, MethodKind, Subject, TrainedModel};
use crate::metrics;
use crate::pipeline::WindowSearch;

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Bifb)]
    pub method: MethodArg,
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: PathBuf,
    /// Train with this single window length instead of the window grid.
    #[arg(long)]
    pub window_sec: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
    pub windows: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,1")]
    pub bandwidths: Vec<f64>,
    /// Gain of the highest target relative to the lowest.
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,2,3")]
    pub gains: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,1")]
    pub harmonic_weights: Vec<f64>,
    #[command(flatten)]
    pub signal: SignalArgs,
}

fn pct(p: f64) -> String {
    format!("{:.1}", 100.0 * p)
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.digits$}"))
}

/// Every target needs two trials so leave-one-out keeps one for training.
fn check_coverage(subject: &Subject, targets: &[f64]) -> anyhow::Result<()> {
    for f in targets {
        let n = subject
            .trials
            .iter()
            .filter(|t| (t.frequency - f).abs() < 1e-9)
            .count();
        if n < 2 {
            bail!(
                "subject {}: target {f} Hz has {n} trial(s), training needs at least 2 per target",
                subject.id
            );
        }
    }
    Ok(())
}

pub fn run(args: &TrainArgs) -> anyhow::Result<()> {
    check_manifest(&args.manifest)?;
    let dataset = load_dataset(&args.manifest)?;
    let targets = dataset.manifest.targets.clone();
    for subject in &dataset.subjects {
        check_coverage(subject, &targets)?;
    }
    ensure_dir(&args.out)?;
    let config = args.signal.preprocess();
    let windows = match args.window_sec {
        Some(w) => vec![w],
        None => args.windows.clone(),
    };
    let grid = TrainingGrid {
        bandwidths: args.bandwidths.clone(),
        gains: args.gains.clone(),
        harmonic_weights: args.harmonic_weights.clone(),
        window_seconds: windows.clone(),
        step_seconds: args.signal.step_sec,
    };

    let mut log = String::new();
    for subject in &dataset.subjects {
        for method in args.method.kinds() {
            let _ = writeln!(
                log,
                "subject {} method {method} trials {}",
                subject.id,
                subject.trials.len()
            );
            let (model, resub, holdout) = match method {
                MethodKind::Bifb => {
                    let trainer = Trainer::new(&subject.trials, &targets, grid.clone(), &config)
                        .with_context(|| format!("training BIFB for subject {}", subject.id))?;
                    let trained = trainer.search_all()?;
                    let _ = writeln!(log, "  window bandwidth gain w_h accuracy(%) MDT(s) ITR(bits/min)");
                    for p in &trained.trace {
                        let c = p.candidate;
                        let _ = writeln!(
                            log,
                            "  {} {} {} {} {} {} {}",
                            c.window_seconds,
                            c.bandwidth,
                            c.gain,
                            c.harmonic_weight,
                            pct(p.fitness.accuracy),
                            opt(p.fitness.mdt_seconds, 2),
                            opt(p.fitness.itr, 2)
                        );
                    }
                    let c = trained.best.candidate;
                    let _ = writeln!(
                        log,
                        "  selected window {} s, bandwidth {} Hz, gain {}, w_h {}",
                        c.window_seconds, c.bandwidth, c.gain, c.harmonic_weight
                    );
                    let holdout = metrics::accuracy(&trainer.leave_one_out()?)?;
                    let model = TrainedModel::bifb(trained.bank, trained.plan, Some(subject.id.clone()));
                    (model, trained.best.fitness.accuracy, holdout)
                }
                MethodKind::Psda | MethodKind::Cca => {
                    let detector = baseline(method, &targets, &args.signal)?;
                    let search = WindowSearch::new(&detector, &subject.trials, &windows, args.signal.step_sec, &config)
                        .with_context(|| format!("training {} for subject {}", method.label(), subject.id))?;
                    let all: Vec<usize> = (0..search.trial_count()).collect();
                    let trace = search.trace(&all)?;
                    let _ = writeln!(log, "  window accuracy(%) MDT(s) ITR(bits/min)");
                    for (plan, fit) in &trace {
                        let _ = writeln!(
                            log,
                            "  {} {} {} {}",
                            plan.window_seconds,
                            pct(fit.accuracy),
                            opt(fit.mdt_seconds, 2),
                            opt(fit.itr, 2)
                        );
                    }
                    let best = search.best(&all)?;
                    let plan = search.plans()[best];
                    let _ = writeln!(log, "  selected window {} s", plan.window_seconds);
                    let holdout = metrics::accuracy(&search.leave_one_out()?)?;
                    let model = TrainedModel::window_only(method, &targets, plan, Some(subject.id.clone()));
                    (model, trace[best].1.accuracy, holdout)
                }
            };
            let _ = writeln!(
                log,
                "  resubstitution accuracy {}%, leave-one-out accuracy {}%",
                pct(resub),
                pct(holdout)
            );
            let path = model_path(&args.out, &subject.id, method);
            model.save(&path)?;
            println!(
                "{} {}: resubstitution {}%, leave-one-out {}% -> {}",
                subject.id,
                method.label(),
                pct(resub),
                pct(holdout),
                path.display()
            );
        }
    }
    write_file(&args.out.join("training_report.txt"), &log)
}
