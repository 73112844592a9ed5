use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid factor dimensions {dims:?} for extent {extent}")]
    InvalidFactorDims { dims: Vec<usize>, extent: usize },

    #[error("not Hermitian: deviation {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("not positive semi-definite: eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },

    #[error("trace is {trace:.12} (violation {violation:.3e})")]
    TraceViolation { trace: f64, violation: f64 },

    #[error("state is not normalized: norm^2 = {norm_sq:.12}")]
    NotNormalized { norm_sq: f64 },

    #[error("support violation: kernel eigenvector {index} of the reference carries weight {weight:.3e}")]
    SupportViolation { index: usize, weight: f64 },

    #[error("rank deficient operator: smallest eigenvalue {eigenvalue:.3e}")]
    RankDeficient { eigenvalue: f64 },

    #[error("invalid factor selection: {0}")]
    InvalidFactors(String),

    #[error("operator is not unitary: residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("operator is not an isometry: residual {residual:.3e}")]
    NotIsometry { residual: f64 },

    #[error("Kraus set is not trace preserving: completeness residual {residual:.3e}")]
    NotTracePreserving { residual: f64 },

    #[error("Choi operator is not positive: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("state is not an eigenstate of {generator}: <g> = {expectation:.6}")]
    NotEigenstate { generator: String, expectation: f64 },

    #[error("uncorrectable syndrome {0:?}")]
    Uncorrectable(Vec<i8>),

    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),

    #[error("quadrature mass deficit: {mass:.12}")]
    QuadratureMass { mass: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
