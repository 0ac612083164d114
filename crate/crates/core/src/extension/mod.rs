//! Extended B-splines: classification of trimmed bases, donor spans,
//! extrapolation weights and the extension matrix.

pub mod curve;
pub mod domain;
pub mod matrix;
pub mod tensor;
pub mod univariate;

pub use curve::CurveTrimmedBasis;
pub use domain::ValidDomain1D;
pub use matrix::ExtensionMatrix;
pub use tensor::{bivariate_weights, TensorTrimmedBasis};
pub use univariate::{
    build_extension_matrix, classify, find_donor_span, univariate_weights, univariate_weights_with, Role,
    TrimmedBasis1D,
};
