//! Verification toolkit for hyperbolic polynomials and hyperbolicity cones.
//!
//! The crate is organised bottom-up:
//!
//! - [`polycore`]: exact sparse homogeneous polynomials over the rationals,
//!   directional derivatives, composition with linear maps and the polar form.
//! - [`spectrum`]: hyperbolic eigenvalues, rank/multiplicity and exact Sturm
//!   root counting.
//! - [`cones`]: hyperbolicity cones, derivative relaxations and membership.
//! - [`faces`]: rank-based facial machinery for generator models.
//! - [`autgroup`]: certification and refutation of cone automorphisms.
//! - [`gallery`]: the concrete cones (orthant, PSD, SOC, ℓ1, spectrahedral).
//! - [`suite`]: the theorem suite shared by the acceptance tests and the CLI.

pub mod autgroup;
pub mod cones;
pub mod error;
pub mod faces;
pub mod gallery;
pub mod linalg;
pub mod num;
pub mod polycore;
pub mod report;
pub mod sampling;
pub mod spectrum;
pub mod suite;

pub use error::{HyperError, Result};
pub use num::Rational;
