//! Subspace codes for the operator channel.
//!
//! * [`gf`], [`linpoly`], [`subspace`]: the algebra everything else uses.
//! * [`channel`]: insertions and deletions applied to subspaces.
//! * [`lfrs`]: linearized folded Reed-Solomon codes, decodable from both
//!   insertions and deletions.
//! * [`kk`], [`mv`]: insertion-only list decoders for the restricted
//!   KK code and its MV variant.
//! * [`bounds`]: the random-coding trade-off and a Monte-Carlo checker.
//! * [`experiment`]: parameter files, round-trip sweeps, JSON reports.

pub mod bounds;
pub mod channel;
pub mod error;
pub mod experiment;
pub mod gf;
pub mod kk;
pub mod lfrs;
pub mod linalg;
pub mod linpoly;
pub mod mv;
pub mod subspace;

#[cfg(test)]
mod properties;

pub use error::{Error, ErrorClass, Result};
pub use gf::{make_field, FieldCtx, FieldElem};
pub use linpoly::LinPoly;
pub use subspace::Subspace;
