use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} did not converge")]
    NoConvergence { what: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("jump point {point} of the integrand is missing from the quadrature breakpoints")]
    MissingBreakpoint { point: f64 },

    #[error("coefficient {index} has imaginary part {imag:e}; symbol is not even")]
    RealnessViolation { index: i64, imag: f64 },

    #[error("dispersion touches zero (min |eps_k| = {min_abs:e}); ground state is degenerate")]
    Gapless { min_abs: f64 },

    #[error("correlation eigenvalue {value} outside [-1, 1]")]
    InvalidCorrelation { value: f64 },

    #[error("system of {n} spins is too large for {what} (max {max})")]
    TooLarge { what: &'static str, n: usize, max: usize },

    #[error("fit needs at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
