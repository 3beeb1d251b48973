//! Canonical correlation between a two-channel window and each target's
//! sinusoidal reference set.

use bifb::baseline::{cca_max_correlation, reference_rows};
use bifb::io::{synth_trial, SynthSpec};

fn main() -> bifb::Result<()> {
    let fs = 256.0;
    let n = 1024;
    let a = synth_trial(&SynthSpec::clean(9.3, 4.0, fs, 1).with_snr_db(-3.0))?;
    let b = synth_trial(&SynthSpec::clean(9.3, 4.0, fs, 2).with_snr_db(-3.0))?;
    let x = vec![a.channel(0).to_vec(), b.channel(0).to_vec()];

    for f in [6.0, 6.5, 7.0, 7.5, 8.2, 9.3, 10.0] {
        let refs = reference_rows(f, n, fs, 2)?;
        let sol = cca_max_correlation(&x, &refs)?;
        println!("{f:5.1} Hz  rho = {:.4}", sol.rho);
    }
    Ok(())
}
