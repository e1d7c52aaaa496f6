use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the toolkit.
///
/// `Inconclusive` is reserved for numerical verdicts that could not be
/// reached at working precision; it must never be folded into a negative
/// answer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid degree {0}: must be at least 2")]
    InvalidDegree(u32),

    #[error("digit {digit} out of range for base {base}")]
    InvalidDigit { digit: u32, base: u32 },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("angle 0 gives a degenerate kneading partition")]
    DegeneratePartition,

    #[error("requested {what} {requested} exceeds the configured bound {limit}")]
    ResourceBound {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("angle {0} has period 1 and lands alone")]
    LandsAlone(String),

    #[error("angle {0} is not periodic under doubling")]
    NotPeriodic(String),

    #[error("angle {0} is not in the tuned copy")]
    NotInCopy(String),

    #[error("no unique root pair of period {period} nests around {target}")]
    Ambiguous { period: u32, target: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("Newton iteration did not converge from the given seed ({0})")]
    Seed(String),

    #[error("root satisfies a lower-order equation ({0})")]
    DegenerateRoot(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive(_))
    }
}
