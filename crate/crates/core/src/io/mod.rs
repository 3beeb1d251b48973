//! Dataset manifests and trial CSVs, trained model files, the seeded
//! synthetic SSVEP generator, report tables and SVG plots.

pub mod manifest;
pub mod model;
pub mod plot;
pub mod report;
pub mod synth;
pub mod trial_csv;

pub use manifest::{load_dataset, Dataset, DatasetManifest, Subject, SubjectEntry, TrialEntry};
pub use model::{MethodKind, TrainedModel};
pub use plot::{plot_spectrum, write_svg};
pub use report::{export_report, render_csv, render_text, ReportFormat};
pub use synth::{synth_corpus, synth_trial, NoiseKind, SynthSpec};
pub use trial_csv::{read_trial_csv, write_trial_csv};
