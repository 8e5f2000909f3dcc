//! Library side of the command-line front end: file format, sweep harness
//! and the subcommand implementations.

pub mod commands;
pub mod matrix_file;
pub mod sweep;

use std::fmt;

/// Command errors carrying the process exit code: 2 input/parse, 3 invalid
/// state, 4 inadmissible generation parameters.
#[derive(Debug, Clone)]
pub enum CliError {
    Input(String),
    InvalidState(String),
    Inadmissible { min_eigenvalue: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::InvalidState(_) => 3,
            CliError::Inadmissible { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            CliError::Inadmissible { min_eigenvalue } => write!(
                f,
                "inadmissible parameters: operator has min eigenvalue {min_eigenvalue:.6e}"
            ),
        }
    }
}

impl std::error::Error for CliError {}

impl From<classicality::Error> for CliError {
    fn from(e: classicality::Error) -> Self {
        match e {
            classicality::Error::InvalidState(report) => CliError::InvalidState(report.to_string()),
            classicality::Error::NotPositive { min_eigenvalue } => {
                CliError::Inadmissible { min_eigenvalue }
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

/// State families known to `generate` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[clap(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Classical mixture over the computational product basis.
    ClassicalAligned,
    /// Classical mixture over Haar-random local bases.
    ClassicalRotated,
    /// Tensor product of two Ginibre-random factors.
    Product,
    /// Single nonzero correlation coefficient, random admissible strength.
    XForm,
    /// Maximally entangled pure state.
    MaxEntangled,
    /// Ginibre-random bipartite state.
    Ginibre,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::ClassicalAligned => "classical_aligned",
            Family::ClassicalRotated => "classical_rotated",
            Family::Product => "product",
            Family::XForm => "x_form",
            Family::MaxEntangled => "max_entangled",
            Family::Ginibre => "ginibre",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// SplitMix64 step; used to derive independent seeds from a base seed and
/// an index so that rows, samples and restarts never share a stream.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for row `index` of a run with base seed `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index))
}
