//! Simulation, data formats and the command-line front end for the
//! missing-data-robust WMW test in `rankguard-core`.

pub mod analyze;
pub mod cli;
pub mod dataset;
pub mod dist;
pub mod error;
pub mod missing;
pub mod report;
pub mod rng;
pub mod scenario;
pub mod sim;
