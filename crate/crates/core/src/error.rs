use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("kernel is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("kernel is numerically zero")]
    ZeroKernel,

    /// Douglas condition R(T*A) ⊆ R(A) fails, so no A-adjoint exists.
    #[error("operator admits no A-adjoint (range residual {residual:.3e})")]
    NotAdmissible { residual: f64 },

    /// T(N(A)) ⊄ N(A): the A-seminorm is infinite and W_A(T) = C.
    #[error("operator is not A-bounded: seminorm is infinite")]
    Unbounded,

    #[error("N(A)^perp is not invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("infeasible instance spec: {0}")]
    InfeasibleSpec(String),

    #[error("operator {index} violates required class {class}")]
    ClassViolation { index: usize, class: String },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
