//! Library surface of the CLI: scene configuration loading and report
//! writing, shared by the binary and the acceptance suite.

pub mod config;
pub mod report;
