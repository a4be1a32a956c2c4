use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("class has {found} coefficients but the surface basis has {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("class {0} is not effective")]
    NotEffective(String),

    #[error("{0} is not very ample")]
    NotVeryAmple(String),

    #[error("out of verified scope: {0}")]
    OutOfScope(String),

    #[error("unsupported surface: {0}")]
    UnsupportedSurface(String),

    #[error(
        "no pushforward splitting for branch {branch} at r = {r}: for r >= 2 the pushforward of \
         Theta^r is only known to be torsion-free on |L| and locally free on the integral locus, \
         so no decomposition is available"
    )]
    UnsupportedBranch { branch: String, r: u32 },

    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
