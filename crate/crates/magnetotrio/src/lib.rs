//! File formats, run manifests, parallel grid sweeps and the subcommands
//! behind the `magnetotrio` binary.

pub mod commands;
pub mod io;
pub mod manifest;
pub mod parallel;

pub use magnetotrio_core as core;
