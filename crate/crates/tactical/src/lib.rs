//! File formats, parallel solving and the command-line front end for
//! `tactical-core`.

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod problem;
pub mod report;
