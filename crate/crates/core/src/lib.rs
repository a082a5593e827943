//! Entanglement measures for bipartite qudit states.
//!
//! The crate is organized around a small dense complex linear-algebra kernel
//! ([`linalg`]), bipartite state representations with Schmidt decomposition and
//! partial transpose ([`states`]), the entanglement measures and invariants
//! built on top of them ([`measures`]), and convex-roof extensions of those
//! measures to mixed states ([`roof`]).
//!
//! All quantities here are desk-scale: dense matrices up to dimension ~64,
//! double precision throughout. Everything is a pure function of its inputs
//! and safe to call from multiple threads.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod rng;
pub mod roof;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix};
pub use states::{BipartiteDims, DensityMatrix, PureState, SchmidtForm, State};
