//! Library half of the `mgsim` command-line tool: scenario configuration,
//! command execution, and report writers. The binary in `main.rs` is a
//! thin argument-parsing shell over [`run::execute`].

pub mod config;
pub mod report;
pub mod run;
