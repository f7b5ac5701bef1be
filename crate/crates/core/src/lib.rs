//! Boundary strata of genus-zero multiscale differential moduli spaces.
//!
//! Signatures and stable trees ([`signature`], [`tree`]) give enhanced level
//! graphs ([`graph`], [`strata`]). On top of those sit the lattice
//! computations for ghost groups and prong-matchings ([`lattice`]), the
//! cherry criteria and smoothness classification ([`cherry`]), divisor
//! intersections and censuses ([`geometry`]) and Betti numbers via the
//! blowup tower ([`cohomology`]).

pub mod cherry;
pub mod cohomology;
pub mod error;
pub mod families;
pub mod geometry;
pub mod graph;
pub mod lattice;
pub mod par;
pub mod signature;
pub mod strata;
pub mod tree;

pub use error::{Error, Result};
pub use graph::EnhancedLevelGraph;
pub use signature::{LegSet, Signature};
pub use strata::Options;
