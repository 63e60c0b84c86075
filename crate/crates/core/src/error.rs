use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants are grouped so that front ends can map them onto exit codes:
/// resource exhaustion is distinct from every other failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Element, group or matrix shapes that do not fit together.
    #[error("structural error: {0}")]
    Structural(String),
    /// A precondition on the mathematical input does not hold.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or support cap was exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    /// The requested norm or estimator is not available for this group.
    #[error("capability error: {0}")]
    Capability(String),
    /// A resolvent solve was too ill-conditioned to trust.
    #[error("conditioning error: {0}")]
    Conditioning(String),
    /// The function is not holomorphic on a contour disk.
    #[error("analyticity error: {0}")]
    Analyticity(String),
    /// An eigenvalue sits on (or numerically at) a region boundary.
    #[error("geometric degeneracy: {0}")]
    GeometricDegeneracy(String),
    /// An eigenvalue lies outside the region or on its boundary.
    #[error("membership error: {0}")]
    Membership(String),
    /// The component grid is too coarse for the declared primitives.
    #[error("resolution error: {0}")]
    Resolution(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
