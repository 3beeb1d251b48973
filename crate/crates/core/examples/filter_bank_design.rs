//! Builds a triangular filter bank and prints its responses and class
//! scores for a synthetic spectrum.

use bifb::bifb::{class_scores, gain_profile, pick_frequency, FilterBank};
use bifb::signal::Spectrum;

fn main() -> bifb::Result<()> {
    let targets = [6.0, 6.5, 7.0, 7.5, 8.2, 9.3, 10.0];
    let gains = gain_profile(&targets, 2.0);
    let bank = FilterBank::new(&targets, &[0.4; 7], &gains, 0.5)?;

    println!("target  gain   support          apex");
    for f in bank.fundamentals() {
        let (lo, hi) = f.support();
        println!("{:6.1}  {:.3}  {lo:6.2}..{hi:6.2}  {:.3}", f.center, f.gain, f.peak());
    }
    let (lo, hi) = bank.coverage();
    println!("bank covers {lo:.2}..{hi:.2} Hz");

    // flat floor with peaks at 7.5 Hz and its harmonic
    let spacing = 0.05;
    let mags: Vec<f64> = (0..500)
        .map(|i| {
            let f = i as f64 * spacing;
            0.1 + (-((f - 7.5) / 0.1).powi(2)).exp() + 0.5 * (-((f - 15.0) / 0.1).powi(2)).exp()
        })
        .collect();
    let spectrum = Spectrum::new(0.0, spacing, mags)?;
    let scores = class_scores(&spectrum, &bank, 4.0)?;
    for (t, s) in scores.targets.iter().zip(&scores.scores) {
        println!("c({t}) = {s:.4}");
    }
    println!("picked {} Hz", pick_frequency(&scores)?.frequency);
    Ok(())
}
