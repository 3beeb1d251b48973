use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("signal too short: {len} samples, band-pass filter has {taps} taps")]
    SignalTooShort { len: usize, taps: usize },

    #[error("expected a single-channel window, got {0} channels")]
    Multichannel(usize),

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error(
        "insufficient spectral coverage: filter support [{low}, {high}] Hz outside spectrum [{first}, {last}] Hz"
    )]
    InsufficientCoverage {
        low: f64,
        high: f64,
        first: f64,
        last: f64,
    },

    #[error("no class scores to pick from")]
    EmptyScores,

    #[error("empty spectrum")]
    EmptySpectrum,

    #[error("out-of-order pick: end time {got} s after {last} s")]
    OutOfOrder { got: f64, last: f64 },

    #[error("harmonic {harmonic} of {frequency} Hz exceeds the Nyquist frequency {nyquist} Hz")]
    AboveNyquist {
        frequency: f64,
        harmonic: usize,
        nyquist: f64,
    },

    #[error("underdetermined: {samples} samples for {rows} signal and reference rows")]
    Underdetermined { samples: usize, rows: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("no trial outcomes")]
    NoOutcomes,

    #[error("at least 2 commands are required, got {0}")]
    TooFewCommands(usize),

    #[error("training: {0}")]
    Training(String),

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
