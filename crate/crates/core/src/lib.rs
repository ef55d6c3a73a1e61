//! Finite-depth exploration of the end structure of lazily defined infinite
//! graphs.
//!
//! A [`graph::LazyGraph`] describes a (possibly non-locally-finite) connected
//! graph through ordered neighbor streams. Everything else in the crate works
//! on finite [`graph::Window`]s of such a graph and reports three-valued,
//! depth-stamped answers: a claim is either certified, refuted, or unknown at
//! the depth explored so far, and certified answers never change when the
//! exploration grows.
//!
//! * [`cuts`]: vertex-, inner vertex- and edge-boundaries, cut classification,
//!   star-ball scores.
//! * [`ends`]: rays, tail containment, separation verdicts for vertex-, edge-
//!   and metric ends, end approximants and sequence classification.
//! * [`gallery`]: the standard example graphs with closed-form metrics and
//!   separation oracles.
//! * [`qi`]: sampled quasi-isometry verification and ray transport.
//! * [`walk`]: random walks on free groups and prefix-cone convergence.

pub mod cuts;
pub mod ends;
pub mod error;
pub mod gallery;
pub mod graph;
pub mod qi;
pub mod walk;

pub use error::{Error, Result};
