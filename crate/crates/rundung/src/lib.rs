//! Command-line tooling around `rundung-core`: CSV and lexicon loading,
//! run configuration, model files and the `rundung` commands.

pub mod artifact;
pub mod cli;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod lexicons;
pub mod report;
pub mod synth;
