//! Numerical toolkit for boundary convergence by angle and by angle-set in
//! simply connected planar domains.
//!
//! Points are `Complex64`. Domains carry a closed-form Riemann map from the
//! unit disk, and every notion (hyperbolic sectors, A-sets, convergence
//! angles, harmonic measure) is evaluated by transporting to the disk or to
//! the right half-plane.
//!
//! Angle convention: a sequence converging to `sigma` on the unit circle has
//! angle coordinate `theta = pi/2 - arg(1 - conj(sigma) z)`, so `pi/2` is
//! orthogonal approach and `0`, `pi` are tangential.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod domains;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod scenario;
pub mod sectors;
pub mod semigroup;

pub use error::{Error, Result};
pub use geometry::ComplexPoint;

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
