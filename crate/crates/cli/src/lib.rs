//! Experiment pipeline behind the `ecpp` binary: config loading, planning
//! runs, report comparison and SVG figures.

pub mod compare;
pub mod config;
pub mod run;
pub mod svg;

pub use compare::{compare, format_table, load_reports, reduction_percent, ComparisonRow};
pub use config::RunConfig;
pub use run::{execute, run, summary_table, write_outputs, RunOutput, RunStatus};
