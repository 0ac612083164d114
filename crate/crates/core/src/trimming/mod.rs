//! Valid regions, trimming curves, element classification and integration
//! over cut knot spans.

pub mod coons;
pub mod curve;
pub mod elements;
pub mod quadrature;

pub use coons::{build_coons, element_quadrature, CoonsElement};
pub use curve::{intersect_with_grid, point_in_valid, GridCrossing, GridLine, Location, TrimRegion, TrimmingCurve};
pub use elements::{classify_spans, CutPoint, Element, ElementGrid, ElementType};
pub use quadrature::{gauss_legendre, gauss_legendre_on};
