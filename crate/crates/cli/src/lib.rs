//! Command-line front end for `pvk-core`.
//!
//! Exit codes: 0 success, 1 invalid input or validation failure,
//! 2 cohomological obstruction, 3 internal consistency failure.

pub mod commands;
pub mod problem;

pub use commands::{render, run, Cli, Command, CommonArgs, Format, Outcome};
pub use problem::{load_problem, parse_problem, LoadError, Problem};
