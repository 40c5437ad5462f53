use thiserror::Error;

/// Errors raised by the factorization, moment and approximation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("argument lies on the support ray: {0}")]
    Branch(String),

    #[error("Hankel system is numerically singular for n = {n} at {digits} digits")]
    SingularSystem { n: usize, digits: u32 },

    #[error("iteration failed to converge: {0}")]
    Convergence(String),

    #[error("Thorin measure carries negative mass; no gamma-convolution approximation exists")]
    NotGgc,

    #[error("residue {index} is not positive ({value:e}); working precision is exhausted")]
    NonPositiveResidue { index: usize, value: f64 },

    #[error("mixture weight {index} is negative ({value:e}); working precision is exhausted")]
    NegativeWeight { index: usize, value: f64 },

    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable identifier used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::Branch(_) => "branch",
            Error::SingularSystem { .. } => "singular_system",
            Error::Convergence(_) => "convergence",
            Error::NotGgc => "not_ggc",
            Error::NonPositiveResidue { .. } => "non_positive_residue",
            Error::NegativeWeight { .. } => "negative_weight",
            Error::NonFinite(_) => "non_finite",
            Error::Unsupported(_) => "unsupported",
        }
    }

    /// `true` for errors caused by the caller's inputs rather than by a numerical failure.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_)
                | Error::Domain(_)
                | Error::Pole(_)
                | Error::Branch(_)
                | Error::NotGgc
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
