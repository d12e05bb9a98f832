//! File formats, parallel evaluation and the `morpho` command-line driver
//! built on [`morpho_core`].

pub mod cli;
pub mod config;
pub mod design;
pub mod error;
pub mod export;
pub mod parallel;
pub mod records;
pub mod report;

pub use error::{Error, Result};
