//! Executable emergence arguments for cybersystems.
//!
//! Attacks on a system spread over an attack-defense structure (a graph) and
//! are cleaned with per-step probability `beta` while spreading over each
//! edge with probability `gamma`. The largest adjacency eigenvalue `lambda1`
//! decides the outcome: below `beta/gamma` attacks die out, above it they
//! persist. Because composing systems only adds edges, two sub-threshold
//! systems can interconnect into a super-threshold one, and persistence
//! emerges that no component had. This crate makes that argument
//! machine-checkable:
//!
//! - [`graph`]: attack-defense structures, generators, and the composition
//!   operators (disjoint union, full interconnection, bridges);
//! - [`spectral`]: `lambda1` by power iteration and the threshold verdict;
//! - [`dynamics`]: bit-reproducible stochastic simulation and the
//!   deterministic mean-field iteration;
//! - [`emergence`]: component-vs-composite experiments with an emergence
//!   verdict and attached Monte Carlo evidence;
//! - [`hyperprop`]: the companion argument for *properties*: checks that
//!   security properties such as noninterference and average response time
//!   are not per-trace checkable, plus a finite-horizon safety/liveness
//!   decomposition;
//! - [`rng`]: the documented SplitMix64 draw contract that makes every
//!   simulation reproducible to the bit.

pub mod dynamics;
pub mod emergence;
pub mod error;
pub mod graph;
pub mod hyperprop;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
