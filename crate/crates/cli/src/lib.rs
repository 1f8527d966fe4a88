//! Library half of the `stabilis` command-line driver: input formats,
//! seeded perturbation, scenario execution, reports and sweeps.

pub mod cli;
pub mod commands;
pub mod corpus;
pub mod input;
pub mod op;
pub mod perturb;
pub mod report;
pub mod scenario;

use stabilis_core::amalgam::AmalgamError;
use stabilis_core::burnside::BurnsideError;
use stabilis_core::cone::ConeError;
use stabilis_core::group::GroupError;
use stabilis_core::oracle::OracleError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search budget: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::BudgetExceeded(_) | ConeError::Cancelled => CliError::Budget(e.to_string()),
            ConeError::DimensionMismatch { .. } | ConeError::InvalidCone(_) => CliError::Parse(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<BurnsideError> for CliError {
    fn from(e: BurnsideError) -> Self {
        match e {
            BurnsideError::Cone(c) => c.into(),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<AmalgamError> for CliError {
    fn from(e: AmalgamError) -> Self {
        match e {
            AmalgamError::Cone(c) | AmalgamError::Burnside(BurnsideError::Cone(c)) => c.into(),
            AmalgamError::NotNormal(_) | AmalgamError::SpecMismatch | AmalgamError::DegreeMismatch(..) => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<stabilis_unitary::UnitaryError> for CliError {
    fn from(e: stabilis_unitary::UnitaryError) -> Self {
        CliError::Failed(e.to_string())
    }
}

/// Report schema tag written into every JSON output.
pub const SCHEMA: &str = "stabilis-report/1";
