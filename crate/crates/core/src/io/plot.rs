//! SVG line plots of a spectrum, optionally with the filter bank overlaid.

use std::fmt::Write as _;
use std::path::Path;

use crate::bifb::{FilterBank, TriangularFilter};
use crate::signal::Spectrum;
use crate::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

struct Frame {
    f_min: f64,
    f_max: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, f: f64) -> f64 {
        MARGIN + (f - self.f_min) / (self.f_max - self.f_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - v / self.y_max * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Renders the spectrum as a polyline. With a bank, every fundamental and
/// harmonic filter becomes a `class="filter"` triangle.
pub fn plot_spectrum(spectrum: &Spectrum, bank: Option<&FilterBank>) -> String {
    let mut f_min = f64::INFINITY;
    let mut f_max = f64::NEG_INFINITY;
    let mut y_max: f64 = 0.0;
    if !spectrum.is_empty() {
        f_min = spectrum.first_frequency();
        f_max = spectrum.last_frequency();
        y_max = spectrum.magnitudes().iter().copied().fold(0.0, f64::max);
    }
    if let Some(bank) = bank {
        let (lo, hi) = bank.coverage();
        f_min = f_min.min(lo);
        f_max = f_max.max(hi);
        for f in bank.fundamentals() {
            y_max = y_max.max(f.peak());
        }
    }
    if !(f_min.is_finite() && f_max > f_min) {
        f_min = 0.0;
        f_max = 1.0;
    }
    if !(y_max > 0.0) {
        y_max = 1.0;
    }
    let frame = Frame { f_min, f_max, y_max };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(svg, r#"<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">Frequency (Hz)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0
    );
    for (label, f) in [(frame.f_min, frame.f_min), (frame.f_max, frame.f_max)] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{label:.1}</text>"#,
            frame.x(f),
            y0 + 15.0
        );
    }

    if !spectrum.is_empty() {
        let points: Vec<String> = spectrum
            .magnitudes()
            .iter()
            .enumerate()
            .map(|(i, m)| format!("{:.2},{:.2}", frame.x(spectrum.frequency(i)), frame.y(*m)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="spectrum" fill="none" stroke="steelblue" points="{}"/>"#,
            points.join(" ")
        );
    }
    if let Some(bank) = bank {
        for f in bank.fundamentals() {
            triangle(&mut svg, &frame, f, "fundamental", "");
        }
        for f in bank.harmonics() {
            triangle(&mut svg, &frame, f, "harmonic", r#" stroke-dasharray="4 3""#);
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn triangle(svg: &mut String, frame: &Frame, filter: &TriangularFilter, kind: &str, extra: &str) {
    let (lo, hi) = filter.support();
    let _ = writeln!(
        svg,
        r#"<polyline class="filter {kind}" data-center="{}" fill="none" stroke="firebrick"{extra} points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
        filter.center,
        frame.x(lo),
        frame.y(0.0),
        frame.x(filter.center),
        frame.y(filter.peak()),
        frame.x(hi),
        frame.y(0.0),
    );
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
