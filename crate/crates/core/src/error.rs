use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SplineError {
    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("span index {span} out of range for a basis of {count} functions")]
    SpanOutOfRange { span: usize, count: usize },

    #[error("basis index {index} out of range for a basis of {count} functions")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("parameter {u} lies outside [{lower}, {upper}]")]
    ParameterOutOfRange { u: f64, lower: f64, upper: f64 },

    #[error("knot {u} already has multiplicity {multiplicity}; degree {degree} allows at most {degree}")]
    MultiplicityOverflow { u: f64, multiplicity: usize, degree: usize },

    #[error("control net has {found} points, basis requires {expected}")]
    ControlNetMismatch { expected: usize, found: usize },

    #[error("operation requires a clamped (open) knot vector")]
    NotClamped,

    #[error("evaluation point {lambda} outside the support [{lower}, {upper}] of basis function {index}")]
    DualPointOutOfSupport { index: usize, lambda: f64, lower: f64, upper: f64 },

    #[error("valid domain does not overlap the knot domain")]
    EmptyDomain,

    #[error("no donor span for degenerated function {index}: no fully interior span hosts only stable functions")]
    NoDonorSpan { index: usize },

    #[error("index {index} is not a degenerated basis function")]
    NotDegenerated { index: usize },

    #[error("parameter {u} is outside the valid domain")]
    OutsideValidInterval { u: f64 },

    #[error("point ({u}, {v}) is outside the valid domain")]
    OutsideValidDomain { u: f64, v: f64 },

    #[error("trimming curve touches the grid line {line} tangentially near curve parameter {param}")]
    TangentialContact { line: String, param: f64 },

    #[error("invalid cutting pattern in knot span ({span_u}, {span_v}): {reason}")]
    InvalidCuttingPattern { span_u: usize, span_v: usize, reason: String },

    #[error("element type {0} has no Coons mapping")]
    NotTrimmedElement(i32),

    #[error("collocation matrix is singular (estimated condition number {kappa:e})")]
    SingularSystem { kappa: f64 },

    #[error("Schoenberg-Whitney condition violated for basis function {index}")]
    SchoenbergWhitney { index: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("function has zero L2 norm over the domain")]
    ZeroNorm,

    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, SplineError>;
