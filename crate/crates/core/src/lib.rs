//! SSVEP frequency detection with triangular spectral filter banks.
//!
//! The crate covers the whole offline decoding chain: band-pass filtering,
//! normalization and sliding-window spectra ([`signal`]), the triangular
//! filter-bank detector with its 3-of-4 temporal decision rule and grid-search
//! trainer ([`bifb`]), the PSDA and CCA comparison detectors ([`baseline`]),
//! accuracy / mean detection time / ITR reporting ([`metrics`]), and the
//! canonical dataset format plus a seeded synthetic SSVEP generator ([`io`]).
//!
//! ```
//! use bifb::bifb::FilterBank;
//! use bifb::io::synth::{synth_trial, SynthSpec};
//! use bifb::signal::{PreprocessConfig, WindowPlan};
//! use bifb::metrics::DetectionResult;
//!
//! let targets = [8.0, 14.0, 28.0];
//! let bank = FilterBank::uniform(&targets, 0.6, 1.0, 0.5).unwrap();
//! let trial = synth_trial(&SynthSpec::clean(14.0, 15.0, 256.0, 7)).unwrap();
//! let outcome = bifb::bifb::detect_trial(&trial, &bank, &WindowPlan::default(), &PreprocessConfig::default()).unwrap();
//! assert_eq!(outcome, DetectionResult::Detected { frequency: 14.0, time: 6.0 });
//! ```

// `!(a < b)` style checks deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod bifb;
pub mod cli;
mod error;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod signal;

pub use error::{Error, Result};
