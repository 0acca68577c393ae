use thiserror::Error;

/// Errors raised anywhere in the spectral or thermodynamic pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root refinement ended with a residual that is too large.
    #[error("root refinement failed: {0}")]
    RootFailure(String),

    /// An iterative solver ran out of its iteration budget.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Exact integer arithmetic overflowed.
    #[error("integer overflow: {0}")]
    Overflow(String),

    /// The spectrum cutoff is too low for the requested quantity.
    #[error("cutoff inadequate: {0}")]
    Cutoff(String),

    /// A query falls outside the range covered by the spectrum.
    #[error("out of range: {0}")]
    Range(String),

    /// More particles requested than states available below the cutoff.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The operation is not defined for this dimension.
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(u32),

    /// Malformed spectrum cache file.
    #[error("cache format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
