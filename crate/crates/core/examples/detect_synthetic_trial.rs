//! Generates one noisy SSVEP trial and follows the window-by-window votes
//! of the filter-bank detector until the 3-of-4 rule fires.

use bifb::bifb::{class_scores, pick_frequency, DecisionState, FilterBank};
use bifb::io::{synth_trial, SynthSpec};
use bifb::pipeline::{preprocess, ChannelSelection};
use bifb::signal::{magnitude_spectrum, sliding_windows, PreprocessConfig, WindowPlan};

fn main() -> bifb::Result<()> {
    let targets = [8.0, 14.0, 28.0];
    let spec = SynthSpec::clean(14.0, 15.0, 256.0, 7).with_snr_db(0.0);
    let trial = synth_trial(&spec)?;
    println!("14 Hz trial, noise std {:.3}", spec.noise_std);

    let config = PreprocessConfig::default();
    let plan = WindowPlan::default();
    let bank = FilterBank::uniform(&targets, 0.6, 1.0, 0.5)?;
    let prepared = preprocess(&trial, &config, ChannelSelection::One("Oz"))?;

    let mut state = DecisionState::new(prepared.duration());
    for window in sliding_windows(&prepared, &plan).windows {
        let spectrum = magnitude_spectrum(&window.signal, &config)?;
        let scores = class_scores(&spectrum, &bank, window.end_time)?;
        let pick = pick_frequency(&scores)?;
        let status = state.update(pick)?;
        let shown: Vec<String> = scores.scores.iter().map(|s| format!("{s:.3}")).collect();
        println!("t = {:4.1} s  scores [{}]  vote {:>4} Hz  {status:?}", window.end_time, shown.join(", "), pick.frequency);
        if let Some(result) = status.into_result() {
            println!("result: {result:?}");
            break;
        }
    }
    Ok(())
}
