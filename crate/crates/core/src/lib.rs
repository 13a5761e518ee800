//! Exact computations on partition-symmetric polymatroid cones.
//!
//! Set functions on `{1..n}` are stored densely with exact rational values.
//! For a partition `p` of the ground set, the functions invariant under
//! permutations inside each block form a subspace; intersecting it with the
//! polymatroid cone gives a much smaller cone whose facets are indexed by
//! orbit labels. The crate builds these cones, enumerates their extreme rays,
//! and checks known ray families, gap witnesses and facet-isolation witnesses.

pub mod cone;
pub mod error;
pub mod families;
pub mod partition;
pub mod rational;
pub mod sample;
pub mod setfn;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
