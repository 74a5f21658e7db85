//! Shared error type for the whole crate.

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the contract of the receiving operation.
    #[error("domain: {0}")]
    Domain(String),

    /// A series was expected to look like z + a2 z^2 + ... and does not.
    #[error("not normalized: {0}")]
    NotNormalized(String),

    /// The inner series of a composition must vanish at the origin.
    #[error("nonzero constant term: |c0| = {0:.3e}")]
    NonzeroConstantTerm(f64),

    /// A printed bound has no real value at these parameters.
    #[error("bound undefined: {0}")]
    BoundUndefined(String),

    /// A derived-formula denominator vanished at these parameters.
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    /// A Schwarz pair violates the structural relation q1 = -p1.
    #[error("inconsistent pair: {0}")]
    InconsistentPair(String),
}

pub type Result<T> = std::result::Result<T, Error>;
