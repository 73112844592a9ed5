//! Finite-dimensional quantum information toolkit.
//!
//! States, entropies, channels, recovery maps and stabilizer codes built on a
//! single dense linear-algebra substrate. See the `examples/` directory for a
//! runnable tour of each capability.

pub mod channels;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod holo;
pub mod linalg;
pub mod qec;
pub mod random;
pub mod recovery;
pub mod states;
pub mod suites;

pub use error::{Error, Result};
