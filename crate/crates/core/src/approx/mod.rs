//! Interpolation on trimmed bases: collocation systems, the naive
//! shifted-anchor baseline, condition numbers and relative L2 errors.

pub mod collocation;
pub mod conditioning;
pub mod error_norm;

pub use collocation::{
    check_schoenberg_whitney, collocation_matrix, curve_stabilized_system, interpolate, naive_anchors, naive_system,
    stabilized_system, tensor_naive_system, tensor_stabilized_system, CollocationSystem, NaiveAnchors,
};
pub use conditioning::{condition_number_1, condition_number_2};
pub use error_norm::{quadrature_1d, quadrature_curve, quadrature_tensor, relative_l2_error};

/// Interpolation with the extended basis or with the naive baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Extended,
    Naive,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Extended => "extended",
            Method::Naive => "naive",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one interpolation run. A failed solve keeps `kappa` and
/// reports an infinite error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyResult {
    pub t: f64,
    pub method: Method,
    pub kappa: f64,
    pub err_rel_l2: f64,
    pub dof: usize,
}
