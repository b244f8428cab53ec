//! File formats, solver routing and the command line for connected chore
//! division. The algorithms live in `chores-core`.

pub mod cli;
pub mod dimacs;
pub mod format;
pub mod parallel;
pub mod route;
