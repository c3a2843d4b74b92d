//! Command-line pipeline for nuclab: configuration, CSV artifacts and the
//! claims deviation report.

pub mod config;
pub mod ledger;
pub mod output;
pub mod pipeline;

pub use config::{ConfigError, RunConfig};
pub use pipeline::{run_pipeline, RunError, Stage};
