//! Exact tools for multiple-choice polynomial programs: the hypergraph of an
//! instance, its coordinate family, relaxations, vertex enumeration, facet
//! certification, lifting, decomposition checks and an exact solver.

pub mod battery;
pub mod decompose;
pub mod error;
pub mod exactmath;
pub mod hypergraph;
pub mod instance;
pub mod lifting;
pub mod oracle;
pub mod polytope;
pub mod relaxation;
pub mod solve;
pub mod verify;

pub use error::{Error, Result};
