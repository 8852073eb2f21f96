//! Spin configurations on the discrete hypercube {-1,+1}^N and the
//! combinatorial structures used to collapse the nearest-neighbour walk on it
//! to a low-dimensional birth-death-like chain: coordinate partitions,
//! sign-flip orbits, and lumping maps.
//!
//! Everything here is exact integer/bit arithmetic; no floating point.

mod lumping;
mod partition;
mod set;
mod spin;

pub use lumping::{
    build_partition_from_set, is_compatible, lump, orbit, refine_partition_for_point, LumpingMap,
};
pub use partition::Partition;
pub use set::{dist_to_set, hypothesis_h, hypothesis_h_with, SpinSet, DEFAULT_H_THRESHOLD};
pub use spin::SpinConfig;

use thiserror::Error;

/// Errors for configuration, partition and lumping construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CubeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("empty set not allowed")]
    EmptySet,
    #[error("orbit too large: d = {d} would enumerate 2^{d} configurations")]
    OrbitTooLarge { d: usize },
}
