//! Front end for `misolab-core`: operator spec files, analysis reports and
//! the invariant suites behind `misolab verify`.

pub mod commands;
pub mod entry;
pub mod error;
pub mod report;
pub mod spec;
pub mod suites;

pub use commands::{execute, Cli, Command};
pub use error::CliError;
pub use report::AnalysisReport;
pub use spec::{ModeTag, Operator, OperatorSpecFile};
