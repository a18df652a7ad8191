//! Exact combinatorics of partition categories, their intertwiner operators
//! and the free probability and fusion data derived from them.

pub mod actions;
pub mod categories;
pub mod cyclo;
pub mod error;
pub mod fingerprint;
pub mod freeprob;
pub mod fusion;
pub mod groups;
pub mod linalg;
pub mod operators;
pub mod partitions;
pub mod scalar;

pub use error::{Error, Result};
