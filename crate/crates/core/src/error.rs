use thiserror::Error;

/// Errors raised by the library.
///
/// Everything except [`Error::Consistency`] describes bad input; a
/// consistency error means two independent computations disagreed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("torsion subgroup has {size} elements, more than the enumeration cap of {cap}")]
    EnumerationLimit { size: u128, cap: u64 },

    #[error("group ring elements live over different groups")]
    GroupMismatch,

    #[error("element {0} has infinite order")]
    InfiniteOrder(String),

    #[error("degenerate linking form: {0}")]
    DegenerateLinkingForm(String),

    #[error("invalid linking form: {0}")]
    InvalidLinkingForm(String),

    #[error("inconsistent torsion: {0}")]
    InconsistentTorsion(String),

    #[error("invalid lens space parameters L({p},{q}): need p >= 2 and gcd(p, q) = 1")]
    InvalidLensParameters { p: i64, q: i64 },

    #[error("invalid framing {0}")]
    InvalidFraming(i64),

    #[error("Alexander polynomial is not normalized: {0}")]
    Normalization(String),

    #[error("Alexander polynomial is not symmetric: {0}")]
    Symmetry(String),

    #[error("genus {genus} is impossible for an Alexander polynomial of span {span}")]
    InvalidGenus { genus: u64, span: i64 },

    #[error("pairing has no value for basic element {0}")]
    IncompletePairing(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

impl Error {
    /// True when the error signals a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
