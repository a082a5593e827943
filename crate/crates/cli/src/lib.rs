//! Library side of the `quent` command-line tool: state file formats,
//! verification-campaign machinery, and report serialization. The binary in
//! `main.rs` is a thin argument-parsing layer over these modules.

pub mod checks;
pub mod report;
pub mod statefile;
