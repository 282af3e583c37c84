//! Command-line interface and JSON service for the Cookie Monster solver.

pub mod api;
pub mod cli;
pub mod play;

pub use cli::{main_with, Cli};
