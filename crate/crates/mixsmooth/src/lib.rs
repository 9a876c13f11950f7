//! File formats and subcommands of the `mixsmooth` command-line tool.
//!
//! Exit codes: `0` success, `1` invalid input, `2` a hypothesis of the
//! requested computation or decision does not hold.

pub mod cli;
pub mod fnspec;
pub mod output;
pub mod query;
