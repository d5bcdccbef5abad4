//! Workspace files, command dispatch and canonical reports for bethkit.

pub mod commands;
pub mod report;
pub mod workspace;

pub use commands::{emit, run, Cli, CliError, Command, Format};
pub use report::Report;
pub use workspace::{load_workspace, parse_and_resolve, ExpansionDef, Workspace, WorkspaceError};
