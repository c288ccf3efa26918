//! Experiment drivers for `folner-core`: flat key-value configs, the eight
//! experiments, and deterministic report emission.

pub mod config;
mod error;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind, ReportFormat};
pub use error::{LabError, Result};
pub use experiments::run;
pub use report::{ExperimentReport, Table};
