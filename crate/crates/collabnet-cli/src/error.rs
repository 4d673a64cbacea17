// SPDX-License-Identifier: Apache-2.0

//! Error-to-exit-code mapping for the pipeline stages.

use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    /// Unrecoverable io or serialization failure. Exit 1.
    Internal(String),
    /// Invalid input data or infeasible configuration. Exit 3.
    Data(String),
    /// A required artifact from an earlier stage is missing. Exit 4.
    Upstream { missing: PathBuf, hint: String },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Data(_) => 3,
            CliError::Upstream { .. } => 4,
        }
    }

    pub fn internal(err: impl fmt::Display) -> Self {
        CliError::Internal(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Internal(msg) => write!(f, "{msg}"),
            CliError::Data(msg) => write!(f, "{msg}"),
            CliError::Upstream { missing, hint } => {
                write!(f, "missing {}: {hint}", missing.display())
            }
        }
    }
}

impl std::error::Error for CliError {}

macro_rules! from_data_error {
    ($($ty:ty),+ $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(err: $ty) -> Self {
                CliError::Data(err.to_string())
            }
        })+
    };
}

from_data_error!(
    collabnet::model::ModelError,
    collabnet::graph::GraphError,
    collabnet::measures::MeasureError,
    collabnet::community::CommunityError,
    collabnet::stats::StatsError,
    collabnet::forest::ForestError,
    collabnet::synth::SynthError,
);

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}
