//! Verbal subgroups on tuples of normal subgroups of finite groups.
//!
//! The crate evaluates group words on finite groups given by Cayley tables,
//! computes value sets and verbal subgroups, builds the linear series for
//! lower central and derived words, and verifies the statements about them
//! by exhaustive enumeration.

pub mod error;
pub mod groups;
pub mod harness;
pub mod series;
pub mod verbal;
pub mod words;

pub use error::{Error, Result};
