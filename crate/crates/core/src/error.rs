use core::fmt;

/// Every failure the core can report. `code()` gives a stable machine-readable tag.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range.
    InvalidParams(&'static str),
    /// `1/p0 = 1/p1`, so interpolation weights are undefined.
    DegenerateExponents,
    InvalidQuery(&'static str),
    /// The width index lies in `N/2 < n < N` with `p < q`, where no order formula is tabulated.
    OutOfRegime,
    InvalidSpec(&'static str),
    /// The target exponent is not between `p0` and `p1`.
    NotBetween,
    /// No notation's preamble matches the tuple (typically a boundary such as `mu + alpha = 0`).
    NoCaseApplies,
    NoRoot,
    TruncationFailure,
    NotDetermined,
    UnsupportedCombination,
    DimensionTooLarge,
    SamplingStarved { acceptance_rate: f64 },
    ConstraintViolated(&'static str),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::DegenerateExponents => "DegenerateExponents",
            Error::InvalidQuery(_) => "InvalidQuery",
            Error::OutOfRegime => "OutOfRegime",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::NotBetween => "NotBetween",
            Error::NoCaseApplies => "NoCaseApplies",
            Error::NoRoot => "NoRoot",
            Error::TruncationFailure => "TruncationFailure",
            Error::NotDetermined => "NotDetermined",
            Error::UnsupportedCombination => "UnsupportedCombination",
            Error::DimensionTooLarge => "DimensionTooLarge",
            Error::SamplingStarved { .. } => "SamplingStarved",
            Error::ConstraintViolated(_) => "ConstraintViolated",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(why) => write!(f, "invalid parameters: {why}"),
            Error::DegenerateExponents => write!(f, "1/p0 equals 1/p1; interpolation weights undefined"),
            Error::InvalidQuery(why) => write!(f, "invalid query: {why}"),
            Error::OutOfRegime => write!(f, "n lies in (N/2, N) with p < q; no order formula"),
            Error::InvalidSpec(why) => write!(f, "invalid two-ball spec: {why}"),
            Error::NotBetween => write!(f, "target exponent is not between p0 and p1"),
            Error::NoCaseApplies => write!(f, "no notation case applies to these parameters"),
            Error::NoRoot => write!(f, "critical curve equation has no sign change in the bracket"),
            Error::TruncationFailure => write!(f, "lattice tail did not decay within the truncation limit"),
            Error::NotDetermined => write!(f, "width exponent is not determined for these parameters"),
            Error::UnsupportedCombination => write!(f, "unsupported ball/subspace/norm combination"),
            Error::DimensionTooLarge => write!(f, "dimension too large for exact enumeration"),
            Error::SamplingStarved { acceptance_rate } => {
                write!(f, "sampling starved: acceptance rate {acceptance_rate:e}")
            }
            Error::ConstraintViolated(why) => write!(f, "constraint violated: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
