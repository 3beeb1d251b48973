//! Comparison detectors: spectral peak picking (PSDA) and canonical
//! correlation against sinusoidal references (CCA).

mod cca;
mod psda;

pub use cca::{
    build_references, cca_max_correlation, cca_pick, reference_rows, CcaDetector, CcaSolution, References,
    ReferenceSet,
};
pub use psda::{psda_pick, PsdaConfig, PsdaDetector};
