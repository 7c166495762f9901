// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// Probability has reached the outer band of the momentum ladder.
    #[error(
        "grid overflow: edge occupation {edge_weight:.3e} exceeds tolerance {tolerance:.1e}{}",
        location(*trajectory, *kick)
    )]
    GridOverflow {
        edge_weight: f64,
        tolerance: f64,
        trajectory: Option<usize>,
        kick: Option<usize>,
    },

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed curve document: {0}")]
    Format(String),
}

fn location(trajectory: Option<usize>, kick: Option<usize>) -> String {
    match (trajectory, kick) {
        (Some(t), Some(k)) => format!(" (trajectory {t}, kick {k})"),
        (None, Some(k)) => format!(" (kick {k})"),
        (Some(t), None) => format!(" (trajectory {t})"),
        (None, None) => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Config { .. } | Error::OutOfRange(_) => 2,
            Error::GridOverflow { .. } | Error::Degenerate(_) => 3,
            Error::Io { .. } | Error::Format(_) => 4,
        }
    }
}
