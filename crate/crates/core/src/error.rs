use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric: max |A_ij - A_ji| = {deviation:e} exceeds {tolerance:e}")]
    NotSymmetric { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{algorithm} did not converge within {iterations} iterations")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("symbol is singular at (x={x}, theta={theta})")]
    SingularPoint { x: f64, theta: f64 },

    #[error("symbol is singular at every lattice point")]
    EverywhereSingular,

    #[error("symbol takes non-real value {value} at (x={x}, theta={theta})")]
    ComplexSymbol { x: f64, theta: f64, value: String },

    #[error("division by an expression without an a.e.-nonzero declaration")]
    UndeclaredDivision,

    #[error("Toeplitz matrix of a non-real-valued generating function has complex entries")]
    ComplexToeplitz,

    #[error("grid map is not increasing: step {step} = {value:e}")]
    MapNotIncreasing { step: usize, value: f64 },

    #[error("coefficient `{0}` must be declared continuous")]
    ContinuityRequired(String),

    #[error("spectrum is not real (max |Im| = {max_imag:e}); use singular value mode")]
    ComplexSpectrum { max_imag: f64 },

    #[error("symbol is unbounded; rearrangement comparison is not defined")]
    UnboundedSymbol,

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("unknown coefficient `{0}`")]
    UnknownCoefficient(String),

    #[error("unknown certificate family `{0}`")]
    UnknownFamily(String),

    #[error("malformed symbol json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
