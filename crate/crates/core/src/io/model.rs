//! Trained model files: plain TOML key/value text.
//!
//! ```toml
//! method = "bifb"
//! subject = "Subject1"
//! targets = [8.0, 14.0, 28.0]
//! window_seconds = 4.0
//! step_seconds = 1.0
//! bandwidths = [0.6, 0.6, 0.6]
//! gains = [1.0, 1.4, 2.0]
//! harmonic_weight = 0.5
//! ```
//!
//! PSDA and CCA models carry only the window plan.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bifb::FilterBank;
use crate::signal::WindowPlan;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Bifb,
    Psda,
    Cca,
}

impl MethodKind {
    pub const ALL: [MethodKind; 3] = [MethodKind::Psda, MethodKind::Cca, MethodKind::Bifb];

    pub fn as_str(&self) -> &'static str {
        match self {
            MethodKind::Bifb => "bifb",
            MethodKind::Psda => "psda",
            MethodKind::Cca => "cca",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MethodKind::Bifb => "BIFB",
            MethodKind::Psda => "PSDA",
            MethodKind::Cca => "CCA",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bifb" => Ok(MethodKind::Bifb),
            "psda" => Ok(MethodKind::Psda),
            "cca" => Ok(MethodKind::Cca),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub method: MethodKind,
    pub subject: Option<String>,
    pub targets: Vec<f64>,
    pub plan: WindowPlan,
    /// Present exactly when `method` is BIFB.
    pub bank: Option<FilterBank>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    method: MethodKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    subject: Option<String>,
    targets: Vec<f64>,
    window_seconds: f64,
    step_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bandwidths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gains: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    harmonic_weight: Option<f64>,
}

impl TrainedModel {
    pub fn bifb(bank: FilterBank, plan: WindowPlan, subject: Option<String>) -> Self {
        Self {
            method: MethodKind::Bifb,
            subject,
            targets: bank.targets().to_vec(),
            plan,
            bank: Some(bank),
        }
    }

    pub fn window_only(method: MethodKind, targets: &[f64], plan: WindowPlan, subject: Option<String>) -> Self {
        Self {
            method,
            subject,
            targets: targets.to_vec(),
            plan,
            bank: None,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        let file = ModelFile {
            method: self.method,
            subject: self.subject.clone(),
            targets: self.targets.clone(),
            window_seconds: self.plan.window_seconds,
            step_seconds: self.plan.step_seconds,
            bandwidths: self.bank.as_ref().map(FilterBank::bandwidths),
            gains: self.bank.as_ref().map(FilterBank::gains),
            harmonic_weight: self.bank.as_ref().map(FilterBank::harmonic_weight),
        };
        toml::to_string(&file).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        let file: ModelFile = toml::from_str(text).map_err(|e| Error::parse(path, e.message()))?;
        let plan = WindowPlan::new(file.window_seconds, file.step_seconds).map_err(|e| Error::parse(path, e))?;
        let bank = match (file.method, file.bandwidths, file.gains, file.harmonic_weight) {
            (MethodKind::Bifb, Some(bw), Some(g), Some(wh)) => {
                Some(FilterBank::new(&file.targets, &bw, &g, wh).map_err(|e| Error::parse(path, e))?)
            }
            (MethodKind::Bifb, ..) => {
                return Err(Error::parse(
                    path,
                    "bifb model needs bandwidths, gains and harmonic_weight",
                ))
            }
            _ => None,
        };
        Ok(Self {
            method: file.method,
            subject: file.subject,
            targets: file.targets,
            plan,
            bank,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bifb_without_bank_fields_rejected() {
        let text = "method = \"bifb\"\ntargets = [8.0, 14.0]\nwindow_seconds = 4.0\nstep_seconds = 1.0\n";
        assert!(TrainedModel::from_toml(text, Path::new("m.toml")).is_err());
    }

    #[test]
    fn window_only_model() {
        let m = TrainedModel::window_only(MethodKind::Cca, &[8.0, 14.0], WindowPlan::new(3.0, 1.0).unwrap(), None);
        let text = m.to_toml().unwrap();
        assert!(!text.contains("gains"));
        assert_eq!(TrainedModel::from_toml(&text, Path::new("m.toml")).unwrap(), m);
    }

    proptest! {
        #[test]
        fn bank_round_trip_is_exact(
            bw in 0.01f64..1.9,
            gains in prop::collection::vec(1e-3f64..10.0, 3),
            wh in 0.0f64..2.0,
            window in 1.0f64..8.0,
        ) {
            let bank = FilterBank::new(&[8.0, 14.0, 28.0], &[bw, bw * 1.01, bw * 0.99], &gains, wh).unwrap();
            let m = TrainedModel::bifb(bank, WindowPlan::new(window, 0.5).unwrap(), Some("S1".into()));
            let back = TrainedModel::from_toml(&m.to_toml().unwrap(), Path::new("m.toml")).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
