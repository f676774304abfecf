use alloc::string::String;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("model is not stationary (spectral abscissa {abscissa})")]
    NonStationary { abscissa: f64 },
    #[error("companion eigenvalues are not distinct (min separation {separation:e})")]
    RepeatedEigenvalues { separation: f64 },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("{what} did not converge within {iterations} terms")]
    Convergence { what: &'static str, iterations: usize },
    #[error("argument {modulus} outside the overflow-guarded range")]
    OverflowGuard { modulus: f64 },
    #[error("Lyapunov system is numerically singular")]
    SingularLyapunov,
    #[error("quadrature tolerance not met (estimated error {error:e}, value {value:e})")]
    Quadrature { value: f64, error: f64 },
    #[error("eigen-expansion has imaginary residue {imag:e} for value {real:e}")]
    ImaginaryResidue { real: f64, imag: f64 },
    #[error("{what}: routes disagree ({left:e} vs {right:e})")]
    RouteMismatch { what: &'static str, left: f64, right: f64 },
    #[error("aliasing tail bracket too wide ({width:e} around {value:e})")]
    TailBoundTooLoose { value: f64, width: f64 },
    #[error("Toeplitz covariance factorization failed after jitter escalation")]
    FactorizationFailure,
}

impl Error {
    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidModel(_) | Error::InvalidArgument(_) | Error::NonStationary { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
