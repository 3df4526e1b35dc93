//! Subcommand implementations, canonical JSON output and run manifests for
//! the `lattice-lab` binary.

pub mod canonical;
pub mod commands;
pub mod manifest;
pub mod verify;
