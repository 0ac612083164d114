//! Power-basis polynomial machinery and the de Boor–Fix dual functional,
//! used to evaluate extrapolation weights.

pub mod dual;
pub mod poly;

pub use dual::{
    default_dual_point, dual_functional, dual_functional_indirect, extrapolation_weight,
    interpolation_coefficients, WeightRoute,
};
pub use poly::{basis_segment, newton_basis_coeffs, segment_to_power, PowerPolynomial, TaylorSegment};
