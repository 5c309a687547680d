//! Subcommand implementations.

pub mod design;
pub mod feasibility;
pub mod scan;
pub mod simulate;
