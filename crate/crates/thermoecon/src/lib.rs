//! Files, threads and the command line for `thermoecon-core`.

pub mod cli;
pub mod config;
pub mod data;
pub mod output;
pub mod parallel;

pub use thermoecon_core as core;
