//! File formats, configuration and command implementations behind the
//! `copycat` binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod persist;
pub mod report;

pub use error::{Error, Result};
