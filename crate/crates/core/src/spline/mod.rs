//! B-spline bases, curves and surfaces.

pub mod basis;
pub mod knots;
pub mod net;

pub use basis::{eval_all, eval_all_derivative, eval_basis, eval_basis_derivatives, Side};
pub use knots::{BasisSpan, KnotVector};
pub use net::{Curve, Direction, Point, Surface};
