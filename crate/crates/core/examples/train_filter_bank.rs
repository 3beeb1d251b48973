//! Grid-searches filter-bank parameters on a synthetic subject whose
//! response weakens with stimulus frequency, then reports leave-one-out
//! accuracy.

use bifb::bifb::{Trainer, TrainingGrid};
use bifb::io::{synth_corpus, SynthSpec};
use bifb::metrics::accuracy;
use bifb::signal::PreprocessConfig;

fn main() -> bifb::Result<()> {
    let targets = [8.0, 14.0, 28.0];
    let template = SynthSpec {
        attenuation_exponent: 1.0,
        reference_frequency: 8.0,
        noise_std: 0.08,
        ..SynthSpec::clean(8.0, 15.0, 256.0, 0)
    };
    let trials = synth_corpus(&targets, 4, &template, 5)?;
    let grid = TrainingGrid::default();
    println!("{} trials, {} grid points", trials.len(), grid.size());

    let trainer = Trainer::new(&trials, &targets, grid, &PreprocessConfig::default())?;
    let trained = trainer.search_all()?;
    let best = trained.best;
    println!(
        "selected: window {} s, bandwidth {} Hz, top gain {}, w_h {}",
        best.candidate.window_seconds, best.candidate.bandwidth, best.candidate.gain, best.candidate.harmonic_weight
    );
    println!("gains per target: {:?}", trained.bank.gains());
    println!(
        "training accuracy {:.1}%, MDT {:?} s, ITR {:?} bits/min",
        100.0 * best.fitness.accuracy,
        best.fitness.mdt_seconds,
        best.fitness.itr
    );
    println!("leave-one-out accuracy {:.1}%", 100.0 * accuracy(&trainer.leave_one_out()?)?);
    Ok(())
}
