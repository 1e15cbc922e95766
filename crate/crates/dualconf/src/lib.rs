//! Command-line front end for `dualconf-core`.
//!
//! Adds what the `no_std` core leaves out: a threaded coverage runner, the JSON
//! envelope and CSV output, and the `dualconf` binary's argument handling.

pub mod cli;
pub mod coverage;
pub mod output;
