//! Dynamic assignment of sequentially arriving cases to capacitated
//! locations under configurable group-fairness rules.
//!
//! The crate provides:
//!
//! - [`domain`]: instances, sample paths, and assignment types;
//! - [`lp`]: a revised-simplex solver and a transportation fast path;
//! - [`fairness`]: the Random, Proportionally Optimized, and Maxmin rules
//!   mapping realized paths to per-group minimum requirements, plus
//!   Monte-Carlo rule statistics;
//! - [`duals`]: location opportunity costs and group amplifiers minimizing
//!   the expected Lagrangian, via an exact sample-average LP or projected
//!   subgradient descent;
//! - [`policies`]: the online decision policies (random, greedy, and the
//!   three bid-price variants) as deterministic seeded state machines;
//! - [`harness`]: bootstrap path generation, offline benchmarks, metrics,
//!   scenario generators, and the experiment driver.

pub mod domain;
pub mod duals;
pub mod error;
pub mod fairness;
pub mod harness;
pub mod lp;
pub mod policies;

#[doc(hidden)]
pub mod testutil;

pub use error::{Error, Result};
