//! Exact computation over finite abelian groups: sumsets, n-term subsequence
//! sums, setpartitions with checkable certificates, and audit drivers.

pub mod error;
pub mod group;
pub mod literal;
pub mod sequence;
pub mod setpartition;
pub mod search;
pub mod verifiers;

pub use error::{Error, InstanceDump, Result};
