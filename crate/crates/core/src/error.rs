use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid segment [{a},{b}] (half-units): need b >= a and b - a even")]
    InvalidSegment { a: i32, b: i32 },

    #[error("line weight must be at least 1")]
    InvalidWeight,

    #[error("union of {0} and {1} is not a segment")]
    NotASegment(String, String),

    #[error("multisegment {0} has a linked pair")]
    NotPairwiseUnlinked(String),

    #[error("multisegment {0} is not a ladder on a single line")]
    NotALadder(String),

    #[error("operator applied to the zero representation")]
    ZeroRepInput,

    #[error("result leaves the supported parameter classes: {0}")]
    UnsupportedDomain(String),

    #[error("integral is not uniquely determined ({0}); derivative rule is not injective here")]
    AmbiguousIntegral(String),

    #[error("eta vectors are not comparable: {0}")]
    InvalidComparison(String),

    #[error("negative multiplicity for {0} in the highest derivative multisegment")]
    NegativeMultiplicity(String),

    #[error("bad size: {0}")]
    BadSize(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("size mismatch: l_abs(pi) = {pi}, l_abs(pi') = {pi2}, expected l_abs(pi) = l_abs(pi') + 1")]
    SizeMismatch { pi: u32, pi2: u32 },

    #[error("dual certificate failed verification: {0}")]
    DualVerificationFailed(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("derivative chain vanishes at step {0}")]
    ZeroDerivativeChain(usize),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
