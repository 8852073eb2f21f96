//! The collapsed walk: a configuration is reduced to its vector of per-class
//! disagreement counts against a reference, turning the 2^N-state walk into a
//! product-of-intervals grid with at most prod_k (|Lambda_k|+1) states.
//!
//! The grid chain is reversible with respect to the pushforward of the
//! uniform measure; everything here keeps exact integer data (counts, class
//! sizes) alongside log-scale floats so that dimensions up to 1024 work.

pub mod comb;

mod chain;
mod point;

pub use chain::{LumpedChain, Move, Neighbor};
pub use num_bigint::BigUint;
pub use point::LumpedPoint;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LumpedError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state space too large: {states} states exceeds cap {cap}")]
    StateSpaceTooLarge { states: u128, cap: u128 },
    #[error("point is not a vertex: {0}")]
    NotAVertex(String),
    #[error("point out of range: {0}")]
    BadPoint(String),
    #[error("invalid step count: {0}")]
    BadStepCount(String),
}
