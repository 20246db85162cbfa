//! File formats, simulation and benchmarking around `fcc-core`, plus the
//! `fcc` command-line tool.

pub mod basis_file;
pub mod bench;
pub mod error;
pub mod sim;
pub mod tdoa;
pub mod threads;
pub mod wav;

pub use error::{Result, ToolError};
