//! Testbed generation, file formats, experiments and the command line.

pub mod cli;
pub mod csvio;
pub mod experiments;
pub mod format;
pub mod testbed;
