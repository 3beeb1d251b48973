//! Writes an SVG of one window's spectrum with the filter bank overlaid.
//! Usage: `cargo run --example spectrum_plot [out.svg]`.

use std::path::PathBuf;

use bifb::bifb::{gain_profile, FilterBank};
use bifb::io::{plot_spectrum, synth_trial, write_svg, SynthSpec};
use bifb::pipeline::{preprocess, ChannelSelection};
use bifb::signal::{magnitude_spectrum, PreprocessConfig};

fn main() -> bifb::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("bifb-spectrum.svg"));
    let targets = [6.0, 6.5, 7.0, 7.5, 8.2, 9.3, 10.0];
    let bank = FilterBank::new(&targets, &[0.4; 7], &gain_profile(&targets, 1.5), 0.5)?;

    let trial = synth_trial(&SynthSpec::clean(7.5, 8.0, 256.0, 3).with_snr_db(0.0))?;
    let config = PreprocessConfig::default();
    let prepared = preprocess(&trial, &config, ChannelSelection::One("Oz"))?;
    let spectrum = magnitude_spectrum(&prepared.slice(0, 1024), &config)?.restrict(4.0, 22.0);

    write_svg(&out, &plot_spectrum(&spectrum, Some(&bank)))?;
    println!("wrote {}", out.display());
    Ok(())
}
