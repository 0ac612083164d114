//! Extended B-splines: stable bases for trimmed spline spaces on
//! non-uniform knot vectors.
//!
//! The crate is organised bottom-up:
//!
//! * [`spline`]: knot vectors, basis evaluation, curves/surfaces, refinement.
//! * [`quasi`]: power-basis polynomials and the de Boor–Fix dual functional.
//! * [`extension`]: classification of trimmed bases, extrapolation weights
//!   and the extension matrix.
//! * [`trimming`]: trimming curves, element types and local Coons mappings.
//! * [`approx`]: collocation systems, condition numbers and L2 errors.
//! * [`studies`]: the interpolation and non-uniformity studies and CSV output.

pub mod approx;
pub mod error;
pub mod extension;
pub mod quasi;
pub mod spline;
pub mod studies;
pub mod trimming;

#[cfg(test)]
mod testutil;

pub use error::{Result, SplineError};
