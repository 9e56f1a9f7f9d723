//! CLI, file formats, and report rendering on top of `qcnoise-core`.

pub mod cli;
pub mod io;
pub mod report;
pub mod run;

pub use cli::DEFAULT_SEED;
