use thiserror::Error;

use crate::metric::SpectralRegime;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge for a {0}x{0} matrix")]
    NonConvergence(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),

    #[error("operation needs regime {expected:?}, Hamiltonian is {got:?}")]
    WrongRegime {
        expected: SpectralRegime,
        got: SpectralRegime,
    },

    #[error("eigenvalue {0} has no complex-conjugate partner")]
    UnpairedEigenvalue(num_complex::Complex64),

    #[error("metric is singular (eigenvalue {0:.3e} within tolerance of zero)")]
    SingularMetric(f64),

    #[error("matrix is diagonalizable, no Jordan block to build from")]
    NotDefective,

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("state has vanishing metric norm")]
    ZeroNorm,

    #[error("expectation value has imaginary part {0:.3e}")]
    NonRealExpectation(f64),

    #[error("spin direction is degenerate (|<sigma>| = {0})")]
    DegenerateDirection(f64),

    #[error("closed-form normalization is non-positive ({0:.6e})")]
    NonPositiveNormalization(f64),

    #[error("survival probability has no long-time limit in the unbroken phase")]
    NoLimit,

    #[error("density-matrix drift {0:.3e} exceeds tolerance; reduce dt_max")]
    StepTooLarge(f64),

    #[error("invalid initial density matrix: {0}")]
    InvalidInitial(String),

    #[error("trace ends at t = {end}, before t_min = {t_min}")]
    InsufficientHorizon { end: f64, t_min: f64 },

    /// `line` is 1-based; 0 marks a command-line override.
    #[error("{}: {msg}", parse_location(*line))]
    Parse { line: usize, msg: String },

    #[error("invalid config: {0}")]
    Validation(String),
}

fn parse_location(line: usize) -> String {
    if line == 0 {
        "override".to_string()
    } else {
        format!("line {line}")
    }
}
