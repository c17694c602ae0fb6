// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("too many nuclei: {0} (at most {max} supported)", max = crate::spin_model::MAX_NUCLEI)]
    TooManyNuclei(usize),

    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("dipolar tensor for pair ({0}, {1}) is not symmetric")]
    AsymmetricDipolar(usize, usize),

    #[error("level index out of range: ({j}, {k}) for dimension {dim}")]
    LevelOutOfRange { j: usize, k: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("trace has no non-DC spectral peak")]
    NoSpectralPeak,

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("parse error at line {line}{}: {msg}", key.as_ref().map(|k| format!(" (key `{k}`)")).unwrap_or_default())]
    Parse {
        line: usize,
        key: Option<String>,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
