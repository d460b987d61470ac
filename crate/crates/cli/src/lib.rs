//! Library side of the `rigidkit` binary: loading, analysis pipelines and
//! report rendering, kept separate from argument parsing so they can be
//! tested directly.

pub mod commands;
pub mod report;

use std::fmt;

use rigidkit_core::RigidityError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// An error with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<RigidityError> for Failure {
    fn from(e: RigidityError) -> Self {
        use RigidityError::*;
        let code = match e {
            DegenerateLeadingVertices { .. }
            | NoNonDegeneratePermutation
            | DimKNotOne(_)
            | ZeroLengthEdge(_)
            | NotACriticalPoint(_)
            | DegenerateFit { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}
