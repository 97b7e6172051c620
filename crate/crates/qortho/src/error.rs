//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The deformation parameter is invalid (v <= 0 or v == 1).
    #[error("invalid q-context: {0}")]
    InvalidContext(String),

    /// Parameter vectors are malformed (lengths, ranges, duplicates).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Gamma_q at a non-positive integer argument.
    #[error("Gamma_q pole at non-positive integer argument {0}")]
    GammaPole(i64),

    /// A lattice site outside the supported range was requested.
    #[error("site {site} outside supported range [{lo}, {hi}]")]
    SiteOutOfRange { site: i64, lo: i64, hi: i64 },

    /// The orthogonality system is singular for the given multi-index.
    #[error("normality failure: {0}")]
    NormalityFailure(String),

    /// A multi-index incompatible with the parameters was supplied.
    #[error("multi-index error: {0}")]
    MultiIndex(String),

    /// Exact polynomial division left a nonzero remainder.
    #[error("exact polynomial division left a nonzero remainder")]
    DivisionRemainder,

    /// The Rodrigues grid does not agree with its interpolating polynomial.
    #[error("rodrigues formula transcription error: grid value at s={site} differs from interpolant")]
    PolynomialityFailure { site: i64 },

    /// A constructed polynomial has a different degree than required.
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: i64, got: i64 },

    /// Sturm-sequence operations reject the zero polynomial.
    #[error("zero polynomial has no root-counting data")]
    ZeroPolynomial,

    /// An interval endpoint coincides with a root.
    #[error("interval endpoint is a root of the polynomial")]
    EndpointIsRoot,

    /// Grid function does not cover the sites an operator needs.
    #[error("grid function lacks guard sites: needs {needed}, first site is {first}")]
    InsufficientGuardSites { needed: i64, first: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
