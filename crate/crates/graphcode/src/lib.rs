//! File formats, JSON reports and the command-line front end for
//! [`graphcode_core`].

pub mod cli;
pub mod format;
pub mod report;

pub use graphcode_core as core;
