//! Digital nets over prime fields and their quasi-uniformity.
//!
//! The crate builds generating matrices ([`construct`]), turns them into
//! exact integer-scaled point sets ([`pointgen`]), measures separation and
//! covering radii ([`geometry`]) and decides kappa-separation either pairwise
//! or through a linear-algebra criterion ([`separation`]). [`repro`] bundles
//! the named reproduction scenarios used by the `qunet` binary.
//!
//! Data-parallel kernels take an [`Execution`]; the `parallel` feature
//! (on by default) backs it with rayon.

pub mod construct;
pub mod error;
pub mod exec;
pub mod field;
pub mod geometry;
pub mod pointgen;
pub mod poly;
#[cfg(test)]
mod proptests;
pub mod report;
pub mod repro;
pub mod separation;

pub use construct::NetSpec;
pub use error::{Error, Result};
pub use exec::Execution;
pub use field::{FieldElement, FieldMatrix, SolveOutcome};
pub use geometry::{Norm, Rational};
pub use pointgen::{NetPoints, ShiftVector};
pub use poly::PolyFb;
