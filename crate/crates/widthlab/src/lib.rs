//! Reports, file formats and the command-line driver for `widthlab-core`.

pub mod cli;
pub mod config;
pub mod extreal;
pub mod report;
pub mod run;

pub use widthlab_core as core;
