//! IO companion for `nilosc-core`: run configuration, sequence specs, and
//! the file formats emitted by the `nilosc` binary.
//!
//! Every command is deterministic given its [`config::RunConfig`] (including
//! the seed): reruns produce byte-identical artifacts. Numeric output uses
//! Rust's shortest round-trip float formatting, so values can be parsed back
//! without loss.

pub mod config;
pub mod error;
pub mod output;
pub mod sequence;

pub use config::RunConfig;
pub use error::CliError;
