//! Command-line front end for `harvestkit`: single evaluations, sweeps,
//! optimizations, figure data, fit verification and self-checks.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod table;
pub mod verify;
