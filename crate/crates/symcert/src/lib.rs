//! File formats, dataset export, worked examples and the command-line front
//! end for `symcert-core`.

pub mod cli;
pub mod dataset;
pub mod demo;
pub mod error;
pub mod formats;
pub mod pgm;
pub mod report;

pub use error::{Error, Result};
