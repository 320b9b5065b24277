//! Simulation studies: depth curves, breakdown bounds, efficiency,
//! robustness and classification, each producing a [`ResultTable`].

mod config;
mod runs;
mod table;

use thiserror::Error;

use crate::error::DepthError;
use crate::io::DataError;

pub use config::{Experiment, ExperimentConfig, KernelTag, Setup, Site};
pub use runs::{
    curve_distributions, run, run_bdp, run_classification, run_curves, run_efficiency, run_robustness,
    setup_populations,
};
pub use table::{parse_metadata, Cell, ChartSpec, Format, ResultTable};

/// Failures surfaced to the command line, grouped by exit code.
#[derive(Debug, Error)]
pub enum ToolError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical failure{context}: {source}")]
    Numerical { context: String, source: DepthError },
    #[error("i/o error: {0}")]
    Io(String),
}

impl ToolError {
    /// 2 for configuration, 3 for data and i/o, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Config(_) => 2,
            ToolError::Data(_) | ToolError::Io(_) => 3,
            ToolError::Numerical { .. } => 4,
        }
    }

    pub(crate) fn numerical(context: impl Into<String>, source: DepthError) -> Self {
        ToolError::Numerical {
            context: format!(" ({})", context.into()),
            source,
        }
    }
}

impl From<DepthError> for ToolError {
    fn from(e: DepthError) -> Self {
        match e {
            DepthError::QuadratureFailure { .. } | DepthError::ConstantDepth | DepthError::NullResultant => {
                ToolError::Numerical {
                    context: String::new(),
                    source: e,
                }
            }
            DepthError::InvalidKernel(_) | DepthError::InvalidParameter(_) | DepthError::DimensionTooSmall(_) => {
                ToolError::Config(e.to_string())
            }
            _ => ToolError::Data(e.to_string()),
        }
    }
}

impl From<DataError> for ToolError {
    fn from(e: DataError) -> Self {
        ToolError::Data(e.to_string())
    }
}
