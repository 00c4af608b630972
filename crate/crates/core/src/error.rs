use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("normalization violated: squared norm {norm_sqr:.17}")]
    Normalization { norm_sqr: f64 },

    #[error("unit trace violated: trace {trace:.17}")]
    Trace { trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("qubit count {n}: {requirement}")]
    QubitCount { n: usize, requirement: &'static str },

    #[error("qubit label {qubit} out of range 1..={n}")]
    QubitLabel { qubit: usize, n: usize },

    #[error("invalid qubit subset: {0}")]
    Subset(String),

    #[error("reduced density matrices differ at qubit {qubit}: distance {distance:.3e}")]
    RdmMismatch { qubit: usize, distance: f64 },

    #[error("state is pure where a mixed state is required")]
    NotMixed,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("no eigenvalue crossing below a = {a_upper:e}")]
    NoCrossing { a_upper: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
